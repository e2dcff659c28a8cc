#include "motoclass/image_io.hpp"

#include <jpeglib.h>
#include <png.h>

#include <csetjmp>
#include <cstdio>
#include <fstream>
#include <vector>

namespace motoclass {

namespace fs = std::filesystem;

namespace {

enum class ImageKind { kNone, kPng, kJpeg };

ImageKind sniff(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("image: cannot open '" + path.string() + "'");
  unsigned char magic[8] = {};
  in.read(reinterpret_cast<char*>(magic), sizeof(magic));
  const auto got = in.gcount();
  static const unsigned char png_sig[8] = {0x89, 'P', 'N', 'G', 0x0d, 0x0a, 0x1a, 0x0a};
  if (got >= 8 && std::equal(png_sig, png_sig + 8, magic)) return ImageKind::kPng;
  if (got >= 3 && magic[0] == 0xff && magic[1] == 0xd8 && magic[2] == 0xff) {
    return ImageKind::kJpeg;
  }
  return ImageKind::kNone;
}

RgbImage from_interleaved_rgb(const unsigned char* data, Index width, Index height) {
  RgbImage out;
  out.r.resize(height, width);
  out.g.resize(height, width);
  out.b.resize(height, width);
  for (Index y = 0; y < height; ++y) {
    for (Index x = 0; x < width; ++x) {
      const unsigned char* px = data + 3 * (y * width + x);
      out.r(y, x) = px[0];
      out.g(y, x) = px[1];
      out.b(y, x) = px[2];
    }
  }
  return out;
}

RgbImage read_png_rgb(const fs::path& path) {
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&image, path.c_str())) {
    throw IoError("png: '" + path.string() + "': " + image.message);
  }
  image.format = PNG_FORMAT_RGB;
  std::vector<unsigned char> buffer(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, buffer.data(), 0, nullptr)) {
    std::string msg = image.message;
    png_image_free(&image);
    throw IoError("png: '" + path.string() + "': " + msg);
  }
  return from_interleaved_rgb(buffer.data(), image.width, image.height);
}

struct JpegErrorTrap {
  jpeg_error_mgr pub;
  std::jmp_buf jump;
  char message[JMSG_LENGTH_MAX];
};

void jpeg_error_exit_trap(j_common_ptr cinfo) {
  auto* trap = reinterpret_cast<JpegErrorTrap*>(cinfo->err);
  (*cinfo->err->format_message)(cinfo, trap->message);
  std::longjmp(trap->jump, 1);
}

RgbImage read_jpeg_rgb(const fs::path& path) {
  FILE* const fp = std::fopen(path.c_str(), "rb");
  if (!fp) throw IoError("jpeg: cannot open '" + path.string() + "'");

  jpeg_decompress_struct cinfo{};
  JpegErrorTrap trap{};
  cinfo.err = jpeg_std_error(&trap.pub);
  trap.pub.error_exit = jpeg_error_exit_trap;

  std::vector<unsigned char> pixels;
  std::vector<unsigned char> row;
  if (setjmp(trap.jump)) {
    jpeg_destroy_decompress(&cinfo);
    std::fclose(fp);
    throw IoError("jpeg: '" + path.string() + "': " + trap.message);
  }

  jpeg_create_decompress(&cinfo);
  jpeg_stdio_src(&cinfo, fp);
  jpeg_read_header(&cinfo, TRUE);
  cinfo.out_color_space = JCS_RGB;
  jpeg_start_decompress(&cinfo);

  const Index width = cinfo.output_width;
  const Index height = cinfo.output_height;
  pixels.resize(static_cast<std::size_t>(3 * width * height));
  row.resize(static_cast<std::size_t>(3 * width));
  while (cinfo.output_scanline < cinfo.output_height) {
    const Index y = cinfo.output_scanline;
    JSAMPROW ptr = row.data();
    jpeg_read_scanlines(&cinfo, &ptr, 1);
    std::copy(row.begin(), row.end(), pixels.begin() + 3 * width * y);
  }
  jpeg_finish_decompress(&cinfo);
  jpeg_destroy_decompress(&cinfo);
  std::fclose(fp);
  return from_interleaved_rgb(pixels.data(), width, height);
}

}  // namespace

bool is_supported_image(const fs::path& path) {
  return sniff(path) != ImageKind::kNone;
}

RgbImage read_image_rgb(const fs::path& path) {
  switch (sniff(path)) {
    case ImageKind::kPng:
      return read_png_rgb(path);
    case ImageKind::kJpeg:
      return read_jpeg_rgb(path);
    default:
      throw IoError("image: '" + path.string() + "' is not a PNG or JPEG file");
  }
}

GrayImage read_image_gray(const fs::path& path) {
  return to_grayscale(read_image_rgb(path));
}

void write_png_gray(const fs::path& path, const GrayImage& img) {
  if (img.size() == 0) throw InvalidInputError("png: refusing to write an empty image");
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(img.cols());
  image.height = static_cast<png_uint_32>(img.rows());
  image.format = PNG_FORMAT_GRAY;
  if (!png_image_write_to_file(&image, path.c_str(), 0, img.data(),
                               static_cast<png_int_32>(img.cols()), nullptr)) {
    throw IoError("png: writing '" + path.string() + "': " + image.message);
  }
}

void write_jpeg_gray(const fs::path& path, const GrayImage& img, int quality) {
  if (img.size() == 0) throw InvalidInputError("jpeg: refusing to write an empty image");
  if (quality < 1 || quality > 100) throw InvalidInputError("jpeg: quality must be in [1, 100]");
  FILE* const fp = std::fopen(path.c_str(), "wb");
  if (!fp) throw IoError("jpeg: cannot open '" + path.string() + "' for writing");

  jpeg_compress_struct cinfo{};
  JpegErrorTrap trap{};
  cinfo.err = jpeg_std_error(&trap.pub);
  trap.pub.error_exit = jpeg_error_exit_trap;

  std::vector<unsigned char> row(static_cast<std::size_t>(img.cols()));
  if (setjmp(trap.jump)) {
    jpeg_destroy_compress(&cinfo);
    std::fclose(fp);
    throw IoError("jpeg: writing '" + path.string() + "': " + trap.message);
  }

  jpeg_create_compress(&cinfo);
  jpeg_stdio_dest(&cinfo, fp);
  cinfo.image_width = static_cast<JDIMENSION>(img.cols());
  cinfo.image_height = static_cast<JDIMENSION>(img.rows());
  cinfo.input_components = 1;
  cinfo.in_color_space = JCS_GRAYSCALE;
  jpeg_set_defaults(&cinfo);
  jpeg_set_quality(&cinfo, quality, TRUE);
  jpeg_start_compress(&cinfo, TRUE);
  while (cinfo.next_scanline < cinfo.image_height) {
    const Index y = cinfo.next_scanline;
    for (Index x = 0; x < img.cols(); ++x) row[static_cast<std::size_t>(x)] = img(y, x);
    JSAMPROW ptr = row.data();
    jpeg_write_scanlines(&cinfo, &ptr, 1);
  }
  jpeg_finish_compress(&cinfo);
  jpeg_destroy_compress(&cinfo);
  if (std::fclose(fp) != 0) throw IoError("jpeg: closing '" + path.string() + "' failed");
}

}  // namespace motoclass
