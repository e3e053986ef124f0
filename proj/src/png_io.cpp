#include "wedgetact/png_io.hpp"

#include <png.h>

#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace wedgetact {

namespace {

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

}  // namespace

void write_png(const std::string& path, const SensorImage& img) {
  if (img.width <= 0 || img.height <= 0) {
    throw std::invalid_argument("write_png: empty image");
  }
  FilePtr fp(std::fopen(path.c_str(), "wb"));
  if (!fp) throw std::runtime_error("write_png: cannot open " + path);

  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png_create_info_struct(png);
  if (!png || !info || setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw std::runtime_error("write_png: libpng failure for " + path);
  }
  png_init_io(png, fp.get());
  png_set_IHDR(png, info, png_uint_32(img.width), png_uint_32(img.height), 8,
               PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  std::vector<png_bytep> rows(img.height);
  for (int y = 0; y < img.height; ++y) {
    rows[y] = const_cast<png_bytep>(&img.pixels[std::size_t(y) * img.width * 3]);
  }
  png_write_image(png, rows.data());
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

SensorImage read_png(const std::string& path) {
  FilePtr fp(std::fopen(path.c_str(), "rb"));
  if (!fp) throw std::runtime_error("read_png: cannot open " + path);

  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png_create_info_struct(png);
  if (!png || !info || setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw std::runtime_error("read_png: not a readable PNG: " + path);
  }
  png_init_io(png, fp.get());
  png_read_info(png, info);

  png_set_expand(png);           // palette/low-bit-depth/tRNS to full bytes
  png_set_strip_16(png);         // 16-bit to 8-bit
  png_set_strip_alpha(png);
  png_set_gray_to_rgb(png);
  png_read_update_info(png, info);

  const int w = int(png_get_image_width(png, info));
  const int h = int(png_get_image_height(png, info));
  if (png_get_rowbytes(png, info) != std::size_t(w) * 3) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw std::runtime_error("read_png: unexpected row layout in " + path);
  }
  SensorImage img(w, h);
  std::vector<png_bytep> rows(h);
  for (int y = 0; y < h; ++y) rows[y] = &img.pixels[std::size_t(y) * w * 3];
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return img;
}

void write_mask_png(const std::string& path, const ContactMask& mask) {
  if (mask.width <= 0 || mask.height <= 0) {
    throw std::invalid_argument("write_mask_png: empty mask");
  }
  FilePtr fp(std::fopen(path.c_str(), "wb"));
  if (!fp) throw std::runtime_error("write_mask_png: cannot open " + path);

  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png_create_info_struct(png);
  if (!png || !info || setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw std::runtime_error("write_mask_png: libpng failure for " + path);
  }
  png_init_io(png, fp.get());
  png_set_IHDR(png, info, png_uint_32(mask.width), png_uint_32(mask.height), 1,
               PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  png_set_packing(png);  // accept one byte per pixel, pack to 1 bit
  std::vector<png_bytep> rows(mask.height);
  for (int y = 0; y < mask.height; ++y) {
    rows[y] = const_cast<png_bytep>(&mask.bits[std::size_t(y) * mask.width]);
  }
  png_write_image(png, rows.data());
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

ContactMask read_mask_png(const std::string& path) {
  const SensorImage img = read_png(path);  // 1-bit gray expands to 0/255 RGB
  ContactMask mask(img.width, img.height);
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      mask.at(x, y) = img.at(x, y, 0) >= 128 ? 1 : 0;
    }
  }
  return mask;
}

void write_mask_rle_csv(const std::string& path, const ContactMask& mask) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_mask_rle_csv: cannot open " + path);
  out << "# mask " << mask.width << "x" << mask.height << "\n";
  out << "y,x_start,length\n";
  for (int y = 0; y < mask.height; ++y) {
    int x = 0;
    while (x < mask.width) {
      if (!mask.at(x, y)) {
        ++x;
        continue;
      }
      int start = x;
      while (x < mask.width && mask.at(x, y)) ++x;
      out << y << "," << start << "," << (x - start) << "\n";
    }
  }
}

ContactMask read_mask_rle_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("read_mask_rle_csv: cannot open " + path);
  std::string header;
  std::getline(in, header);
  int w = 0, h = 0;
  if (std::sscanf(header.c_str(), "# mask %dx%d", &w, &h) != 2 || w <= 0 || h <= 0) {
    throw std::runtime_error("read_mask_rle_csv: bad header in " + path);
  }
  std::getline(in, header);  // column names
  ContactMask mask(w, h);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    int y = 0, x = 0, len = 0;
    if (std::sscanf(line.c_str(), "%d,%d,%d", &y, &x, &len) != 3) {
      throw std::runtime_error("read_mask_rle_csv: bad row: " + line);
    }
    if (y < 0 || y >= h || x < 0 || len < 0 || x + len > w) {
      throw std::runtime_error("read_mask_rle_csv: run out of bounds: " + line);
    }
    for (int i = 0; i < len; ++i) mask.at(x + i, y) = 1;
  }
  return mask;
}

}  // namespace wedgetact
