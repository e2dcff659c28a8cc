#pragma once

#include "motoclass/types.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace motoclass {

/// One dataset image. `path` is stored as written (tools emit paths relative
/// to the manifest's own directory). Cell coordinates are present only for
/// entries produced by mesh extraction.
struct ManifestEntry {
  std::string path;
  std::string label;
  std::string source_id;
  std::optional<std::int64_t> frame_index;
  std::optional<Index> cell_row;
  std::optional<Index> cell_col;
};

struct DatasetManifest {
  std::vector<ManifestEntry> entries;

  /// Distinct labels in sorted order.
  std::vector<std::string> classes() const;

  /// Throws LayoutError if paths collide or (when `require_two_classes`)
  /// the label set is not exactly two.
  void validate(bool require_two_classes = true) const;
};

/// Scans a dataset laid out as one subdirectory per class, each holding PNG
/// or JPEG files. Requires exactly two class subdirectories with at least one
/// image each; every image must decode. Undecodable files are all listed in
/// the thrown error. Entries are ordered lexicographically by path and paths
/// are stored relative to `root_dir`.
DatasetManifest build_manifest(const std::filesystem::path& root_dir);

/// CSV with header `path,label,source_id,frame_index,cell_row,cell_col`,
/// UTF-8, LF line endings. Optional fields serialize as empty cells.
void write_manifest_csv(const DatasetManifest& manifest, std::ostream& out);
void write_manifest_csv(const DatasetManifest& manifest, const std::filesystem::path& file);

DatasetManifest read_manifest_csv(std::istream& in);
DatasetManifest read_manifest_csv(const std::filesystem::path& file);

/// Resolves an entry path against the directory holding the manifest.
std::filesystem::path resolve_entry_path(const std::filesystem::path& base_dir,
                                         const ManifestEntry& entry);

}  // namespace motoclass
