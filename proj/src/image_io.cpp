#include "frontnav/image_io.hpp"

#include <png.h>

#include <cstdio>
#include <fstream>
#include <memory>
#include <stdexcept>

namespace frontnav {

void write_pgm(const std::filesystem::path& path, const MaskGrid& mask) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "P5\n" << mask.cols() << ' ' << mask.rows() << "\n255\n";
  for (auto v : mask.data()) out.put(static_cast<char>(v ? 255 : 0));
}

void write_pgm16(const std::filesystem::path& path, const Grid<std::uint16_t>& image) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "P5\n" << image.cols() << ' ' << image.rows() << "\n65535\n";
  for (auto v : image.data()) {
    out.put(static_cast<char>(v >> 8));
    out.put(static_cast<char>(v & 0xFF));
  }
}

void write_png(const std::filesystem::path& path, const Grid<Rgb>& image) {
  std::unique_ptr<FILE, int (*)(FILE*)> file(std::fopen(path.c_str(), "wb"), &std::fclose);
  if (!file) throw std::runtime_error("cannot write " + path.string());

  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_write_struct(&png, &info);
    throw std::runtime_error("libpng initialisation failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw std::runtime_error("libpng failed writing " + path.string());
  }
  png_init_io(png, file.get());
  png_set_IHDR(png, info, image.cols(), image.rows(), 8, PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  std::vector<png_byte> row(static_cast<std::size_t>(image.cols()) * 3);
  for (int r = 0; r < image.rows(); ++r) {
    for (int c = 0; c < image.cols(); ++c) {
      const Rgb& px = image(r, c);
      row[3 * c] = px[0];
      row[3 * c + 1] = px[1];
      row[3 * c + 2] = px[2];
    }
    png_write_row(png, row.data());
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

}  // namespace frontnav
