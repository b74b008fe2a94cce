// Copyright 2026 The volray Authors
// SPDX-License-Identifier: Apache-2.0
#include <volray/image_io.hpp>

#include <volray/error.hpp>

#include <png.h>

#include <algorithm>
#include <cctype>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

namespace volray {

namespace {

std::string lower_extension(const std::filesystem::path& path) {
    std::string ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return ext;
}

/// RAII over libpng's read/write structs. libpng reports errors through
/// longjmp; every png_* call below sits behind a setjmp in the same frame.
class PngReader {
  public:
    explicit PngReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {
        png_ = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
        if (png_) info_ = png_create_info_struct(png_);
        if (!png_ || !info_) throw Error("libpng allocation failed");
        png_set_read_fn(png_, this, &PngReader::read);
    }
    ~PngReader() { png_destroy_read_struct(&png_, &info_, nullptr); }
    PngReader(const PngReader&) = delete;
    PngReader& operator=(const PngReader&) = delete;

    png_structp png() const { return png_; }
    png_infop info() const { return info_; }

  private:
    static void read(png_structp png, png_bytep out, png_size_t count) {
        auto* self = static_cast<PngReader*>(png_get_io_ptr(png));
        if (self->offset_ + count > self->bytes_.size()) {
            png_error(png, "truncated PNG stream");
        }
        std::memcpy(out, self->bytes_.data() + self->offset_, count);
        self->offset_ += count;
    }

    std::span<const std::uint8_t> bytes_;
    std::size_t offset_ = 0;
    png_structp png_ = nullptr;
    png_infop info_ = nullptr;
};

class PngWriter {
  public:
    PngWriter() {
        png_ = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
        if (png_) info_ = png_create_info_struct(png_);
        if (!png_ || !info_) throw Error("libpng allocation failed");
        png_set_write_fn(png_, &out_, &PngWriter::write, nullptr);
    }
    ~PngWriter() { png_destroy_write_struct(&png_, &info_); }
    PngWriter(const PngWriter&) = delete;
    PngWriter& operator=(const PngWriter&) = delete;

    png_structp png() const { return png_; }
    png_infop info() const { return info_; }
    std::vector<std::uint8_t>& bytes() { return out_; }

  private:
    static void write(png_structp png, png_bytep data, png_size_t count) {
        auto* out = static_cast<std::vector<std::uint8_t>*>(png_get_io_ptr(png));
        out->insert(out->end(), data, data + count);
    }

    std::vector<std::uint8_t> out_;
    png_structp png_ = nullptr;
    png_infop info_ = nullptr;
};

// The png_* sequences live in helpers that only touch caller-owned state, so
// nothing local to the setjmp frame changes before a longjmp.
bool write_png_rows(PngWriter& writer, int width, int height, int bit_depth, int color_type,
                    png_bytepp rows) {
    if (setjmp(png_jmpbuf(writer.png()))) {
        return false;
    }
    png_set_IHDR(writer.png(), writer.info(), static_cast<png_uint_32>(width),
                 static_cast<png_uint_32>(height), bit_depth, color_type, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_set_compression_level(writer.png(), 6);
    png_write_info(writer.png(), writer.info());
    png_write_image(writer.png(), rows);
    png_write_end(writer.png(), nullptr);
    return true;
}

std::vector<std::uint8_t> write_png(int width, int height, int bit_depth, int color_type,
                                    int channels, const std::uint8_t* rows) {
    PngWriter writer;
    const std::size_t stride =
        static_cast<std::size_t>(width) * channels * (bit_depth == 16 ? 2 : 1);
    std::vector<png_bytep> row_pointers(static_cast<std::size_t>(height));
    for (int y = 0; y < height; ++y) {
        row_pointers[static_cast<std::size_t>(y)] =
            const_cast<png_bytep>(rows + static_cast<std::size_t>(y) * stride);
    }
    if (!write_png_rows(writer, width, height, bit_depth, color_type, row_pointers.data())) {
        throw Error("PNG encoding failed");
    }
    return std::move(writer.bytes());
}

bool is_png(std::span<const std::uint8_t> bytes) {
    return bytes.size() >= 8 && png_sig_cmp(bytes.data(), 0, 8) == 0;
}

struct GrayDecode {
    int width = 0;
    int height = 0;
    int bit_depth = 8;
    bool color = false;
    std::vector<std::uint8_t> buffer;
    std::vector<png_bytep> rows;
};

bool read_gray_rows(PngReader& reader, GrayDecode& out) {
    if (setjmp(png_jmpbuf(reader.png()))) {
        return false;
    }
    png_read_info(reader.png(), reader.info());
    const int color_type = png_get_color_type(reader.png(), reader.info());
    const int depth = png_get_bit_depth(reader.png(), reader.info());
    out.width = static_cast<int>(png_get_image_width(reader.png(), reader.info()));
    out.height = static_cast<int>(png_get_image_height(reader.png(), reader.info()));
    out.bit_depth = depth == 16 ? 16 : 8;
    out.color = (color_type & PNG_COLOR_MASK_COLOR) != 0;
    if (out.color) {
        return true;
    }
    if (depth < 8) {
        png_set_expand_gray_1_2_4_to_8(reader.png());
    }
    if (color_type & PNG_COLOR_MASK_ALPHA) {
        png_set_strip_alpha(reader.png());
    }
    png_read_update_info(reader.png(), reader.info());
    const std::size_t stride = png_get_rowbytes(reader.png(), reader.info());
    out.buffer.resize(stride * static_cast<std::size_t>(out.height));
    out.rows.resize(static_cast<std::size_t>(out.height));
    for (int y = 0; y < out.height; ++y) {
        out.rows[static_cast<std::size_t>(y)] =
            out.buffer.data() + static_cast<std::size_t>(y) * stride;
    }
    png_read_image(reader.png(), out.rows.data());
    return true;
}

GrayImage decode_gray_png(std::span<const std::uint8_t> bytes) {
    PngReader reader(bytes);
    GrayDecode decoded;
    if (!read_gray_rows(reader, decoded)) {
        throw CorruptData("malformed PNG data");
    }
    if (decoded.color) {
        throw UnsupportedFormat("slice images must be grayscale");
    }
    GrayImage image;
    image.width = decoded.width;
    image.height = decoded.height;
    image.bit_depth = decoded.bit_depth;
    image.levels.resize(static_cast<std::size_t>(image.width) * image.height);
    const std::vector<std::uint8_t>& b = decoded.buffer;
    for (std::size_t n = 0; n < image.levels.size(); ++n) {
        // PNG stores 16-bit samples big-endian.
        image.levels[n] = image.bit_depth == 16
                              ? static_cast<std::uint16_t>((b[2 * n] << 8) | b[2 * n + 1])
                              : b[n];
    }
    return image;
}

GrayImage decode_pgm(std::span<const std::uint8_t> bytes) {
    std::size_t pos = 2;
    auto skip_space = [&] {
        while (pos < bytes.size()) {
            if (bytes[pos] == '#') {
                while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
            } else if (std::isspace(bytes[pos])) {
                ++pos;
            } else {
                break;
            }
        }
    };
    auto read_int = [&] {
        skip_space();
        long value = 0;
        const std::size_t begin = pos;
        while (pos < bytes.size() && std::isdigit(bytes[pos])) {
            value = value * 10 + (bytes[pos] - '0');
            if (value > 1'000'000) throw CorruptData("PGM header value out of range");
            ++pos;
        }
        if (pos == begin) throw CorruptData("malformed PGM header");
        return static_cast<int>(value);
    };
    GrayImage image;
    image.width = read_int();
    image.height = read_int();
    const int maxval = read_int();
    if (image.width < 1 || image.height < 1 || maxval < 1 || maxval > 65535) {
        throw CorruptData("PGM header describes an invalid image");
    }
    ++pos;  // single whitespace before the raster
    image.bit_depth = maxval > 255 ? 16 : 8;
    const std::size_t count = static_cast<std::size_t>(image.width) * image.height;
    const std::size_t need = count * (image.bit_depth == 16 ? 2 : 1);
    if (pos > bytes.size() || bytes.size() - pos != need) {
        throw CorruptData("PGM raster has the wrong size");
    }
    image.levels.resize(count);
    for (std::size_t n = 0; n < count; ++n) {
        image.levels[n] = image.bit_depth == 16
                              ? static_cast<std::uint16_t>((bytes[pos + 2 * n] << 8) |
                                                           bytes[pos + 2 * n + 1])
                              : bytes[pos + n];
    }
    return image;
}

}  // namespace

std::vector<std::uint8_t> encode_png(const FrameImage& image) {
    return write_png(image.width, image.height, 8, PNG_COLOR_TYPE_RGBA, 4, image.pixels.data());
}

static bool read_rgba_rows(PngReader& reader, FrameImage& image, std::vector<png_bytep>& rows) {
    if (setjmp(png_jmpbuf(reader.png()))) {
        return false;
    }
    png_read_info(reader.png(), reader.info());
    image.width = static_cast<int>(png_get_image_width(reader.png(), reader.info()));
    image.height = static_cast<int>(png_get_image_height(reader.png(), reader.info()));
    png_set_expand(reader.png());
    png_set_strip_16(reader.png());
    png_set_gray_to_rgb(reader.png());
    png_set_add_alpha(reader.png(), 0xff, PNG_FILLER_AFTER);
    png_read_update_info(reader.png(), reader.info());
    image.pixels.resize(4 * static_cast<std::size_t>(image.width) * image.height);
    rows.resize(static_cast<std::size_t>(image.height));
    for (int y = 0; y < image.height; ++y) {
        rows[static_cast<std::size_t>(y)] =
            image.pixels.data() + 4 * static_cast<std::size_t>(y) * image.width;
    }
    png_read_image(reader.png(), rows.data());
    return true;
}

FrameImage decode_png(std::span<const std::uint8_t> bytes) {
    if (!is_png(bytes)) {
        throw CorruptData("not a PNG stream");
    }
    PngReader reader(bytes);
    FrameImage image;
    std::vector<png_bytep> rows;
    if (!read_rgba_rows(reader, image, rows)) {
        throw CorruptData("malformed PNG data");
    }
    return image;
}

std::vector<std::uint8_t> encode_ppm(const FrameImage& image) {
    const std::string header =
        "P6\n" + std::to_string(image.width) + " " + std::to_string(image.height) + "\n255\n";
    std::vector<std::uint8_t> out(header.begin(), header.end());
    out.reserve(out.size() + 3 * static_cast<std::size_t>(image.width) * image.height);
    for (std::size_t n = 0; n < image.pixels.size(); n += 4) {
        out.insert(out.end(), image.pixels.begin() + static_cast<std::ptrdiff_t>(n),
                   image.pixels.begin() + static_cast<std::ptrdiff_t>(n) + 3);
    }
    return out;
}

GrayImage read_gray_image(const std::filesystem::path& path) {
    const std::vector<std::uint8_t> bytes = read_file_bytes(path);
    if (is_png(bytes)) {
        return decode_gray_png(bytes);
    }
    if (bytes.size() >= 2 && bytes[0] == 'P' && bytes[1] == '5') {
        return decode_pgm(bytes);
    }
    throw UnsupportedFormat("unrecognized image format: " + path.string());
}

void write_gray_png(const GrayImage& image, const std::filesystem::path& path) {
    std::vector<std::uint8_t> raster;
    if (image.bit_depth == 16) {
        raster.reserve(image.levels.size() * 2);
        for (const std::uint16_t v : image.levels) {
            raster.push_back(static_cast<std::uint8_t>(v >> 8));
            raster.push_back(static_cast<std::uint8_t>(v & 0xff));
        }
    } else {
        for (const std::uint16_t v : image.levels) {
            raster.push_back(static_cast<std::uint8_t>(std::min<std::uint16_t>(v, 255)));
        }
    }
    write_file_bytes(path, write_png(image.width, image.height, image.bit_depth == 16 ? 16 : 8,
                                     PNG_COLOR_TYPE_GRAY, 1, raster.data()));
}

void save_image(const FrameImage& image, const std::filesystem::path& path) {
    const std::string ext = lower_extension(path);
    if (ext == ".ppm") {
        write_file_bytes(path, encode_ppm(image));
    } else if (ext == ".png") {
        write_file_bytes(path, encode_png(image));
    } else {
        throw UnsupportedFormat("cannot write images with extension '" + ext +
                                "' (use .png or .ppm)");
    }
}

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error("cannot open " + path.string());
    }
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error("cannot open " + path.string() + " for writing");
    }
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) {
        throw Error("failed writing " + path.string());
    }
}

}  // namespace volray
