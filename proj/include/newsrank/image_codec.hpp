#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <jpeglib.h>
#include <png.h>

#include "newsrank/error.hpp"
#include "newsrank/image.hpp"

namespace newsrank {

inline std::vector<std::uint8_t> read_file_bytes(
    const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open file: " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return bytes;
}

namespace detail {

inline RgbImage decode_png(const std::vector<std::uint8_t>& bytes,
                           const std::string& name) {
  png_image png{};
  png.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&png, bytes.data(), bytes.size()))
    throw DataError("PNG decode failed for " + name + ": " + png.message);
  png.format = PNG_FORMAT_RGB;
  RgbImage img;
  img.width = static_cast<int>(png.width);
  img.height = static_cast<int>(png.height);
  img.pixels.resize(PNG_IMAGE_SIZE(png));
  // Alpha, if any, is composited over white.
  png_color white{255, 255, 255};
  if (!png_image_finish_read(&png, &white, img.pixels.data(), 0, nullptr)) {
    png_image_free(&png);
    throw DataError("PNG decode failed for " + name + ": " + png.message);
  }
  return img;
}

struct JpegErrorMgr {
  jpeg_error_mgr pub;
  std::string message;
};

inline void jpeg_error_exit(j_common_ptr cinfo) {
  char buf[JMSG_LENGTH_MAX];
  (*cinfo->err->format_message)(cinfo, buf);
  static_cast<JpegErrorMgr*>(reinterpret_cast<void*>(cinfo->err))->message =
      buf;
  throw DataError(std::string("JPEG decode failed: ") + buf);
}

inline RgbImage decode_jpeg(const std::vector<std::uint8_t>& bytes,
                            const std::string& name) {
  jpeg_decompress_struct cinfo{};
  JpegErrorMgr err{};
  cinfo.err = jpeg_std_error(&err.pub);
  err.pub.error_exit = jpeg_error_exit;
  jpeg_create_decompress(&cinfo);
  RgbImage img;
  try {
    jpeg_mem_src(&cinfo, bytes.data(), static_cast<unsigned long>(bytes.size()));
    jpeg_read_header(&cinfo, TRUE);
    cinfo.out_color_space = JCS_RGB;
    jpeg_start_decompress(&cinfo);
    img.width = static_cast<int>(cinfo.output_width);
    img.height = static_cast<int>(cinfo.output_height);
    img.pixels.resize(static_cast<std::size_t>(img.width) * img.height * 3);
    while (cinfo.output_scanline < cinfo.output_height) {
      JSAMPROW row = img.pixels.data() +
                     static_cast<std::size_t>(cinfo.output_scanline) *
                         img.width * 3;
      jpeg_read_scanlines(&cinfo, &row, 1);
    }
    jpeg_finish_decompress(&cinfo);
  } catch (const DataError& e) {
    jpeg_destroy_decompress(&cinfo);
    throw DataError(std::string(e.what()) + " (" + name + ")");
  }
  jpeg_destroy_decompress(&cinfo);
  return img;
}

}  // namespace detail

// Decodes PNG or JPEG bytes, sniffing the format from the magic numbers.
inline RgbImage decode_image(const std::vector<std::uint8_t>& bytes,
                             const std::string& name = "<memory>") {
  if (bytes.size() >= 8 && bytes[0] == 0x89 && bytes[1] == 'P' &&
      bytes[2] == 'N' && bytes[3] == 'G')
    return detail::decode_png(bytes, name);
  if (bytes.size() >= 2 && bytes[0] == 0xFF && bytes[1] == 0xD8)
    return detail::decode_jpeg(bytes, name);
  throw DataError("unrecognized image format: " + name);
}

inline RgbImage decode_image_file(const std::filesystem::path& path) {
  return decode_image(read_file_bytes(path), path.string());
}

inline void write_png(const RgbImage& img, const std::filesystem::path& path) {
  if (!img.valid()) throw ContractError("write_png: invalid image");
  png_image png{};
  png.version = PNG_IMAGE_VERSION;
  png.width = static_cast<png_uint_32>(img.width);
  png.height = static_cast<png_uint_32>(img.height);
  png.format = PNG_FORMAT_RGB;
  if (!png_image_write_to_file(&png, path.string().c_str(), 0,
                               img.pixels.data(), 0, nullptr))
    throw DataError("PNG encode failed for " + path.string() + ": " +
                    png.message);
}

// Binary PGM, used to hand grayscale images to external OCR processes.
inline void write_pgm(const GrayImage& img, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out << "P5\n" << img.width << " " << img.height << "\n255\n";
  for (double v : img.values) {
    long q = std::lround(v);
    out.put(static_cast<char>(std::clamp(q, 0L, 255L)));
  }
  if (!out) throw DataError("short write to " + path.string());
}

}  // namespace newsrank
