#include "iren/image_io.hpp"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <vector>

namespace iren {

namespace {

std::vector<std::uint8_t> read_all_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open for reading: " + path.string());
  }
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  if (in.bad()) {
    throw IoError("read failed: " + path.string());
  }
  return bytes;
}

void write_all_bytes(const std::filesystem::path& path,
                     const std::vector<std::uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw IoError("cannot open for writing: " + path.string());
  }
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  out.flush();
  if (!out) {
    throw IoError("write failed: " + path.string());
  }
}

// ---------------------------------------------------------------------------
// PGM (P2 ASCII / P5 binary, maxval up to 65535, 16-bit samples big-endian)
// ---------------------------------------------------------------------------

// Skips whitespace and '#' comments, then parses a non-negative integer.
long pgm_next_int(const std::vector<std::uint8_t>& b, std::size_t& pos) {
  while (pos < b.size()) {
    const char c = static_cast<char>(b[pos]);
    if (c == '#') {
      while (pos < b.size() && b[pos] != '\n') ++pos;
    } else if (std::isspace(static_cast<unsigned char>(c))) {
      ++pos;
    } else {
      break;
    }
  }
  if (pos >= b.size() || !std::isdigit(b[pos])) {
    throw CorruptFileError("PGM: expected integer in header");
  }
  long v = 0;
  while (pos < b.size() && std::isdigit(b[pos])) {
    v = v * 10 + (b[pos] - '0');
    if (v > 1L << 40) throw CorruptFileError("PGM: absurd integer in header");
    ++pos;
  }
  return v;
}

Image load_pgm(const std::vector<std::uint8_t>& b) {
  const bool ascii = b[1] == '2';
  std::size_t pos = 2;
  const long w = pgm_next_int(b, pos);
  const long h = pgm_next_int(b, pos);
  const long maxval = pgm_next_int(b, pos);
  if (w <= 0 || h <= 0 || maxval <= 0 || maxval > 65535) {
    throw CorruptFileError("PGM: bad dimensions or maxval");
  }
  const std::size_t n = static_cast<std::size_t>(w) * static_cast<std::size_t>(h);
  std::vector<double> data(n);
  if (ascii) {
    for (std::size_t i = 0; i < n; ++i) {
      const long v = pgm_next_int(b, pos);
      if (v > maxval) throw CorruptFileError("PGM: sample exceeds maxval");
      data[i] = static_cast<double>(v);
    }
  } else {
    if (pos >= b.size() ||
        !std::isspace(static_cast<unsigned char>(b[pos]))) {
      throw CorruptFileError("PGM: missing separator after maxval");
    }
    ++pos;  // exactly one whitespace byte before raster
    const int bytes_per = maxval > 255 ? 2 : 1;
    if (b.size() - pos < n * bytes_per) {
      throw CorruptFileError("PGM: truncated raster");
    }
    for (std::size_t i = 0; i < n; ++i) {
      long v;
      if (bytes_per == 1) {
        v = b[pos + i];
      } else {
        v = (static_cast<long>(b[pos + 2 * i]) << 8) | b[pos + 2 * i + 1];
      }
      if (v > maxval) throw CorruptFileError("PGM: sample exceeds maxval");
      data[i] = static_cast<double>(v);
    }
  }
  return Image(static_cast<int>(h), static_cast<int>(w), Domain::Raw,
               std::move(data));
}

void save_pgm(const std::vector<std::uint16_t>& samples, int h, int w,
              int depth, const std::filesystem::path& path) {
  const int maxval = depth == 8 ? 255 : 65535;
  std::ostringstream header;
  header << "P5\n" << w << " " << h << "\n" << maxval << "\n";
  const std::string hs = header.str();
  std::vector<std::uint8_t> out(hs.begin(), hs.end());
  out.reserve(out.size() + samples.size() * (depth == 8 ? 1 : 2));
  for (std::uint16_t s : samples) {
    if (depth == 8) {
      out.push_back(static_cast<std::uint8_t>(s));
    } else {
      out.push_back(static_cast<std::uint8_t>(s >> 8));
      out.push_back(static_cast<std::uint8_t>(s & 0xff));
    }
  }
  write_all_bytes(path, out);
}

// ---------------------------------------------------------------------------
// PNG via libpng (grayscale only)
// ---------------------------------------------------------------------------

struct PngByteReader {
  const std::vector<std::uint8_t>* bytes;
  std::size_t pos;
};

void png_read_fn(png_structp png, png_bytep out, png_size_t count) {
  auto* r = static_cast<PngByteReader*>(png_get_io_ptr(png));
  if (r->pos + count > r->bytes->size()) {
    png_error(png, "unexpected end of PNG stream");
  }
  std::memcpy(out, r->bytes->data() + r->pos, count);
  r->pos += count;
}

void png_write_fn(png_structp png, png_bytep data, png_size_t count) {
  auto* v = static_cast<std::vector<std::uint8_t>*>(png_get_io_ptr(png));
  v->insert(v->end(), data, data + count);
}

void png_flush_fn(png_structp) {}

Image load_png(const std::vector<std::uint8_t>& bytes) {
  png_structp png =
      png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw IoError("libpng: cannot allocate read struct");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw IoError("libpng: cannot allocate info struct");
  }

  std::vector<png_bytep> rows;
  std::vector<std::uint8_t> raster;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw CorruptFileError("PNG: decode failed");
  }

  PngByteReader reader{&bytes, 0};
  png_set_read_fn(png, &reader, png_read_fn);
  png_read_info(png, info);

  const png_byte color = png_get_color_type(png, info);
  if (color != PNG_COLOR_TYPE_GRAY) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw MultiChannelError("PNG: only single-channel grayscale is supported");
  }
  if (png_get_bit_depth(png, info) < 8) {
    png_set_expand_gray_1_2_4_to_8(png);
  }
  png_read_update_info(png, info);

  const int w = static_cast<int>(png_get_image_width(png, info));
  const int h = static_cast<int>(png_get_image_height(png, info));
  const int depth = png_get_bit_depth(png, info);
  const std::size_t rowbytes = png_get_rowbytes(png, info);

  raster.resize(rowbytes * h);
  rows.resize(h);
  for (int r = 0; r < h; ++r) rows[r] = raster.data() + rowbytes * r;
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);

  std::vector<double> data(static_cast<std::size_t>(w) * h);
  for (int r = 0; r < h; ++r) {
    const std::uint8_t* row = raster.data() + rowbytes * r;
    for (int c = 0; c < w; ++c) {
      if (depth == 16) {
        // network byte order in the file
        data[static_cast<std::size_t>(r) * w + c] =
            static_cast<double>((row[2 * c] << 8) | row[2 * c + 1]);
      } else {
        data[static_cast<std::size_t>(r) * w + c] = static_cast<double>(row[c]);
      }
    }
  }
  return Image(h, w, Domain::Raw, std::move(data));
}

void save_png(const std::vector<std::uint16_t>& samples, int h, int w,
              int depth, const std::filesystem::path& path) {
  png_structp png =
      png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw IoError("libpng: cannot allocate write struct");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    throw IoError("libpng: cannot allocate info struct");
  }

  std::vector<std::uint8_t> out;
  std::vector<std::uint8_t> raster;
  std::vector<png_bytep> rows;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw IoError("PNG: encode failed");
  }

  png_set_write_fn(png, &out, png_write_fn, png_flush_fn);
  png_set_IHDR(png, info, w, h, depth, PNG_COLOR_TYPE_GRAY,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);

  const std::size_t rowbytes = static_cast<std::size_t>(w) * (depth == 8 ? 1 : 2);
  raster.resize(rowbytes * h);
  for (int r = 0; r < h; ++r) {
    std::uint8_t* row = raster.data() + rowbytes * r;
    for (int c = 0; c < w; ++c) {
      const std::uint16_t s = samples[static_cast<std::size_t>(r) * w + c];
      if (depth == 8) {
        row[c] = static_cast<std::uint8_t>(s);
      } else {
        row[2 * c] = static_cast<std::uint8_t>(s >> 8);
        row[2 * c + 1] = static_cast<std::uint8_t>(s & 0xff);
      }
    }
  }
  rows.resize(h);
  for (int r = 0; r < h; ++r) rows[r] = raster.data() + rowbytes * r;
  png_write_image(png, rows.data());
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);

  write_all_bytes(path, out);
}

// ---------------------------------------------------------------------------
// TIFF, baseline subset: uncompressed single-channel gray, 8/16-bit, both
// byte orders on read; little-endian single-strip on write. (libtiff is not
// a dependency of this project.)
// ---------------------------------------------------------------------------

struct TiffReader {
  const std::vector<std::uint8_t>* b;
  bool little;

  std::uint16_t u16(std::size_t off) const {
    if (off + 2 > b->size()) throw CorruptFileError("TIFF: truncated");
    const std::uint8_t* p = b->data() + off;
    return little ? static_cast<std::uint16_t>(p[0] | (p[1] << 8))
                  : static_cast<std::uint16_t>((p[0] << 8) | p[1]);
  }
  std::uint32_t u32(std::size_t off) const {
    if (off + 4 > b->size()) throw CorruptFileError("TIFF: truncated");
    const std::uint8_t* p = b->data() + off;
    return little ? (std::uint32_t(p[0]) | (std::uint32_t(p[1]) << 8) |
                     (std::uint32_t(p[2]) << 16) | (std::uint32_t(p[3]) << 24))
                  : ((std::uint32_t(p[0]) << 24) | (std::uint32_t(p[1]) << 16) |
                     (std::uint32_t(p[2]) << 8) | std::uint32_t(p[3]));
  }
};

struct TiffEntry {
  std::uint16_t type = 0;
  std::uint32_t count = 0;
  std::size_t value_off = 0;  // offset of the inline value field
};

constexpr std::uint16_t kTypeShort = 3;
constexpr std::uint16_t kTypeLong = 4;

// Reads entry values as unsigned integers (SHORT or LONG arrays).
std::vector<std::uint32_t> tiff_values(const TiffReader& r, const TiffEntry& e) {
  if (e.type != kTypeShort && e.type != kTypeLong) {
    throw CorruptFileError("TIFF: unexpected tag type");
  }
  const std::size_t elem = e.type == kTypeShort ? 2 : 4;
  const std::size_t total = elem * e.count;
  std::size_t off = e.value_off;
  if (total > 4) off = r.u32(e.value_off);
  std::vector<std::uint32_t> vals(e.count);
  for (std::uint32_t i = 0; i < e.count; ++i) {
    vals[i] = e.type == kTypeShort ? r.u16(off + elem * i) : r.u32(off + elem * i);
  }
  return vals;
}

Image load_tiff(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() < 8) throw CorruptFileError("TIFF: truncated header");
  TiffReader r{&bytes, bytes[0] == 'I'};
  if (r.u16(2) != 42) throw CorruptFileError("TIFF: bad magic");
  const std::uint32_t ifd = r.u32(4);
  const std::uint16_t nentries = r.u16(ifd);

  std::uint32_t width = 0, height = 0, bits = 1, compression = 1,
                photometric = 1, samples_per_pixel = 1;
  std::vector<std::uint32_t> strip_offsets, strip_counts;

  for (std::uint16_t i = 0; i < nentries; ++i) {
    const std::size_t eo = ifd + 2 + 12 * static_cast<std::size_t>(i);
    const std::uint16_t tag = r.u16(eo);
    TiffEntry e{r.u16(eo + 2), r.u32(eo + 4), eo + 8};
    switch (tag) {
      case 256: width = tiff_values(r, e).at(0); break;
      case 257: height = tiff_values(r, e).at(0); break;
      case 258: {
        auto v = tiff_values(r, e);
        if (v.size() > 1) {
          throw MultiChannelError("TIFF: only single-channel images are supported");
        }
        bits = v.at(0);
        break;
      }
      case 259: compression = tiff_values(r, e).at(0); break;
      case 262: photometric = tiff_values(r, e).at(0); break;
      case 273: strip_offsets = tiff_values(r, e); break;
      case 277: samples_per_pixel = tiff_values(r, e).at(0); break;
      case 279: strip_counts = tiff_values(r, e); break;
      default: break;  // tags we do not interpret (rows-per-strip, resolution, ...)
    }
  }

  if (samples_per_pixel != 1 || photometric >= 2) {
    throw MultiChannelError("TIFF: only single-channel grayscale is supported");
  }
  if (compression != 1) {
    throw UnsupportedFormatError("TIFF: only uncompressed data is supported");
  }
  if (bits != 8 && bits != 16) {
    throw UnsupportedFormatError("TIFF: only 8/16-bit samples are supported");
  }
  if (width == 0 || height == 0 || strip_offsets.empty() ||
      strip_counts.size() != strip_offsets.size()) {
    throw CorruptFileError("TIFF: missing required fields");
  }

  // Concatenate strips into one sample stream.
  std::vector<std::uint8_t> raster;
  raster.reserve(static_cast<std::size_t>(width) * height * (bits / 8));
  for (std::size_t s = 0; s < strip_offsets.size(); ++s) {
    const std::size_t off = strip_offsets[s], cnt = strip_counts[s];
    if (off + cnt > bytes.size()) throw CorruptFileError("TIFF: strip out of range");
    raster.insert(raster.end(), bytes.begin() + off, bytes.begin() + off + cnt);
  }
  const std::size_t n = static_cast<std::size_t>(width) * height;
  if (raster.size() < n * (bits / 8)) {
    throw CorruptFileError("TIFF: raster too small");
  }

  std::vector<double> data(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::uint32_t v;
    if (bits == 8) {
      v = raster[i];
    } else {
      v = r.little ? (raster[2 * i] | (raster[2 * i + 1] << 8))
                   : ((raster[2 * i] << 8) | raster[2 * i + 1]);
    }
    if (photometric == 0) {
      // WhiteIsZero: invert so 0 stays black in our convention
      v = ((1u << bits) - 1) - v;
    }
    data[i] = static_cast<double>(v);
  }
  return Image(static_cast<int>(height), static_cast<int>(width), Domain::Raw,
               std::move(data));
}

void tiff_put16(std::vector<std::uint8_t>& b, std::uint16_t v) {
  b.push_back(static_cast<std::uint8_t>(v & 0xff));
  b.push_back(static_cast<std::uint8_t>(v >> 8));
}

void tiff_put32(std::vector<std::uint8_t>& b, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) b.push_back(static_cast<std::uint8_t>((v >> (8 * i)) & 0xff));
}

void tiff_entry(std::vector<std::uint8_t>& b, std::uint16_t tag,
                std::uint16_t type, std::uint32_t count, std::uint32_t value) {
  tiff_put16(b, tag);
  tiff_put16(b, type);
  tiff_put32(b, count);
  if (type == kTypeShort && count == 1) {
    tiff_put16(b, static_cast<std::uint16_t>(value));
    tiff_put16(b, 0);
  } else {
    tiff_put32(b, value);
  }
}

void save_tiff(const std::vector<std::uint16_t>& samples, int h, int w,
               int depth, const std::filesystem::path& path) {
  std::vector<std::uint8_t> out;
  out.reserve(samples.size() * (depth / 8) + 128);
  // little-endian header; pixel data immediately after, single strip
  out.push_back('I');
  out.push_back('I');
  tiff_put16(out, 42);
  const std::uint32_t data_off = 8;
  const std::uint32_t data_len =
      static_cast<std::uint32_t>(samples.size()) * (depth / 8);
  tiff_put32(out, data_off + data_len);  // IFD follows the raster
  for (std::uint16_t s : samples) {
    out.push_back(static_cast<std::uint8_t>(s & 0xff));
    if (depth == 16) out.push_back(static_cast<std::uint8_t>(s >> 8));
  }
  const std::uint16_t entries = 8;
  tiff_put16(out, entries);
  tiff_entry(out, 256, kTypeLong, 1, static_cast<std::uint32_t>(w));
  tiff_entry(out, 257, kTypeLong, 1, static_cast<std::uint32_t>(h));
  tiff_entry(out, 258, kTypeShort, 1, static_cast<std::uint16_t>(depth));
  tiff_entry(out, 259, kTypeShort, 1, 1);  // no compression
  tiff_entry(out, 262, kTypeShort, 1, 1);  // BlackIsZero
  tiff_entry(out, 273, kTypeLong, 1, data_off);
  tiff_entry(out, 277, kTypeShort, 1, 1);
  tiff_entry(out, 279, kTypeLong, 1, data_len);
  tiff_put32(out, 0);  // no further IFD
  write_all_bytes(path, out);
}

std::string lower_ext(const std::filesystem::path& path) {
  std::string e = path.extension().string();
  std::transform(e.begin(), e.end(), e.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return e;
}

}  // namespace

Image load_image(const std::filesystem::path& path) {
  const auto bytes = read_all_bytes(path);
  if (bytes.size() >= 2 && bytes[0] == 'P' && (bytes[1] == '2' || bytes[1] == '5')) {
    return load_pgm(bytes);
  }
  static const std::uint8_t png_sig[4] = {0x89, 'P', 'N', 'G'};
  if (bytes.size() >= 4 && std::memcmp(bytes.data(), png_sig, 4) == 0) {
    return load_png(bytes);
  }
  if (bytes.size() >= 4 && ((bytes[0] == 'I' && bytes[1] == 'I') ||
                            (bytes[0] == 'M' && bytes[1] == 'M'))) {
    return load_tiff(bytes);
  }
  throw UnsupportedFormatError("unrecognized image format: " + path.string());
}

void save_image(const Image& img, const std::filesystem::path& path, int depth) {
  if (depth != 8 && depth != 16) {
    throw std::invalid_argument("save_image: depth must be 8 or 16");
  }
  if (img.domain() == Domain::Raw) {
    throw std::invalid_argument("save_image: image domain must be Unit or Byte255");
  }
  const double top = static_cast<double>((1u << depth) - 1);
  const double scale = top / domain_top(img.domain());
  auto px = img.pixels();
  std::vector<std::uint16_t> samples(px.size());
  for (std::size_t i = 0; i < px.size(); ++i) {
    double q = round_half_even(px[i] * scale);
    q = std::clamp(q, 0.0, top);
    samples[i] = static_cast<std::uint16_t>(q);
  }

  const std::string ext = lower_ext(path);
  if (ext == ".pgm") {
    save_pgm(samples, img.height(), img.width(), depth, path);
  } else if (ext == ".png") {
    save_png(samples, img.height(), img.width(), depth, path);
  } else if (ext == ".tif" || ext == ".tiff") {
    save_tiff(samples, img.height(), img.width(), depth, path);
  } else {
    throw UnsupportedFormatError("unsupported output extension: " + ext);
  }
}

bool has_supported_extension(const std::filesystem::path& path) {
  const std::string ext = lower_ext(path);
  return ext == ".pgm" || ext == ".png" || ext == ".tif" || ext == ".tiff";
}

}  // namespace iren
