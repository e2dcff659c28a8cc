#include "motoclass/manifest.hpp"

#include "csv.hpp"
#include "motoclass/image_io.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace motoclass {

namespace fs = std::filesystem;

std::vector<std::string> DatasetManifest::classes() const {
  std::set<std::string> labels;
  for (const auto& e : entries) labels.insert(e.label);
  return {labels.begin(), labels.end()};
}

void DatasetManifest::validate(bool require_two_classes) const {
  std::set<std::string> paths;
  for (const auto& e : entries) {
    if (e.path.empty()) throw LayoutError("manifest: entry with empty path");
    if (e.label.empty()) throw LayoutError("manifest: entry '" + e.path + "' has empty label");
    if (!paths.insert(e.path).second) {
      throw LayoutError("manifest: duplicate path '" + e.path + "'");
    }
  }
  if (require_two_classes) {
    const auto cls = classes();
    if (cls.size() != 2) {
      throw LayoutError("manifest: expected exactly 2 classes, found " +
                        std::to_string(cls.size()));
    }
  }
}

namespace {

bool has_image_extension(const fs::path& p) {
  std::string ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext == ".png" || ext == ".jpg" || ext == ".jpeg";
}

}  // namespace

DatasetManifest build_manifest(const fs::path& root_dir) {
  if (!fs::is_directory(root_dir)) {
    throw LayoutError("dataset: '" + root_dir.string() + "' is not a directory");
  }

  std::vector<fs::path> class_dirs;
  for (const auto& entry : fs::directory_iterator(root_dir)) {
    if (entry.is_directory()) class_dirs.push_back(entry.path());
  }
  if (class_dirs.size() != 2) {
    throw LayoutError("dataset: expected exactly 2 class directories under '" +
                      root_dir.string() + "', found " + std::to_string(class_dirs.size()));
  }
  std::sort(class_dirs.begin(), class_dirs.end());

  DatasetManifest manifest;
  std::vector<std::string> bad_files;
  for (const auto& class_dir : class_dirs) {
    const std::string label = class_dir.filename().string();
    std::size_t before = manifest.entries.size();
    for (const auto& file : fs::recursive_directory_iterator(class_dir)) {
      if (!file.is_regular_file() || !has_image_extension(file.path())) continue;
      try {
        read_image_rgb(file.path());
      } catch (const Error&) {
        bad_files.push_back(file.path().string());
        continue;
      }
      ManifestEntry e;
      e.path = fs::relative(file.path(), root_dir).generic_string();
      e.label = label;
      e.source_id = file.path().stem().string();
      manifest.entries.push_back(std::move(e));
    }
    if (manifest.entries.size() == before && bad_files.empty()) {
      throw LayoutError("dataset: class directory '" + class_dir.string() + "' has no images");
    }
  }
  if (!bad_files.empty()) {
    std::string msg = "dataset: " + std::to_string(bad_files.size()) + " undecodable image(s):";
    for (const auto& f : bad_files) msg += "\n  " + f;
    throw IoError(msg);
  }

  std::sort(manifest.entries.begin(), manifest.entries.end(),
            [](const ManifestEntry& a, const ManifestEntry& b) { return a.path < b.path; });
  manifest.validate();
  return manifest;
}

void write_manifest_csv(const DatasetManifest& manifest, std::ostream& out) {
  out << "path,label,source_id,frame_index,cell_row,cell_col\n";
  for (const auto& e : manifest.entries) {
    out << csv::escape(e.path) << ',' << csv::escape(e.label) << ',' << csv::escape(e.source_id)
        << ',';
    if (e.frame_index) out << *e.frame_index;
    out << ',';
    if (e.cell_row) out << *e.cell_row;
    out << ',';
    if (e.cell_col) out << *e.cell_col;
    out << '\n';
  }
}

void write_manifest_csv(const DatasetManifest& manifest, const fs::path& file) {
  std::ofstream out(file);
  if (!out) throw IoError("manifest: cannot open '" + file.string() + "' for writing");
  write_manifest_csv(manifest, out);
  if (!out.good()) throw IoError("manifest: write to '" + file.string() + "' failed");
}

DatasetManifest read_manifest_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw InvalidInputError("manifest: empty input");
  if (csv::strip_cr(line) != "path,label,source_id,frame_index,cell_row,cell_col") {
    throw InvalidInputError("manifest: unexpected header '" + line + "'");
  }
  DatasetManifest manifest;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    line = csv::strip_cr(line);
    if (line.empty()) continue;
    const auto cells = csv::split_line(line);
    if (cells.size() != 6) {
      throw InvalidInputError("manifest: line " + std::to_string(line_no) + " has " +
                              std::to_string(cells.size()) + " cells, expected 6");
    }
    ManifestEntry e;
    e.path = cells[0];
    e.label = cells[1];
    e.source_id = cells[2];
    try {
      if (!cells[3].empty()) e.frame_index = std::stoll(cells[3]);
      if (!cells[4].empty()) e.cell_row = std::stoll(cells[4]);
      if (!cells[5].empty()) e.cell_col = std::stoll(cells[5]);
    } catch (const std::exception&) {
      throw InvalidInputError("manifest: line " + std::to_string(line_no) +
                              " has a malformed numeric cell");
    }
    manifest.entries.push_back(std::move(e));
  }
  return manifest;
}

DatasetManifest read_manifest_csv(const fs::path& file) {
  std::ifstream in(file);
  if (!in) throw IoError("manifest: cannot open '" + file.string() + "'");
  return read_manifest_csv(in);
}

fs::path resolve_entry_path(const fs::path& base_dir, const ManifestEntry& entry) {
  const fs::path p(entry.path);
  return p.is_absolute() ? p : base_dir / p;
}

}  // namespace motoclass
