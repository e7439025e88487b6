#include "fractalmarch/image_io.hpp"

#include <png.h>

#include <fstream>
#include <ostream>
#include <string>

#include "fractalmarch/errors.hpp"

namespace fractalmarch {

void writePpm(const Framebuffer& fb, std::ostream& out) {
    out << "P6\n" << fb.width << ' ' << fb.height << "\n255\n";
    std::string row(static_cast<std::size_t>(fb.width) * 3, '\0');
    for (int y = 0; y < fb.height; ++y) {
        for (int x = 0; x < fb.width; ++x) {
            const std::uint8_t* px = fb.pixel(x, y);
            row[x * 3 + 0] = static_cast<char>(px[0]);
            row[x * 3 + 1] = static_cast<char>(px[1]);
            row[x * 3 + 2] = static_cast<char>(px[2]);
        }
        out.write(row.data(), static_cast<std::streamsize>(row.size()));
    }
    if (!out) {
        throw IoError("failed writing PPM data");
    }
}

namespace {

void pngWrite(png_structp png, png_bytep data, png_size_t length) {
    auto* out = static_cast<std::ostream*>(png_get_io_ptr(png));
    out->write(reinterpret_cast<const char*>(data), static_cast<std::streamsize>(length));
    if (!*out) {
        png_error(png, "stream write failed");
    }
}

void pngFlush(png_structp png) { static_cast<std::ostream*>(png_get_io_ptr(png))->flush(); }

void pngError(png_structp, png_const_charp message) { throw IoError(std::string("PNG: ") + message); }

void pngWarning(png_structp, png_const_charp) {}

struct PngWriter {
    png_structp png = nullptr;
    png_infop info = nullptr;

    PngWriter() {
        png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, pngError, pngWarning);
        if (png == nullptr) {
            throw IoError("PNG: cannot create writer");
        }
        info = png_create_info_struct(png);
        if (info == nullptr) {
            png_destroy_write_struct(&png, nullptr);
            throw IoError("PNG: cannot create info");
        }
    }
    ~PngWriter() { png_destroy_write_struct(&png, &info); }
    PngWriter(const PngWriter&) = delete;
    PngWriter& operator=(const PngWriter&) = delete;
};

}  // namespace

void writePng(const Framebuffer& fb, std::ostream& out) {
    PngWriter w;
    png_set_write_fn(w.png, &out, pngWrite, pngFlush);
    png_set_IHDR(w.png, w.info, static_cast<png_uint_32>(fb.width),
                 static_cast<png_uint_32>(fb.height), 8, PNG_COLOR_TYPE_RGB_ALPHA,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(w.png, w.info);
    for (int y = 0; y < fb.height; ++y) {
        png_write_row(w.png, const_cast<png_bytep>(fb.pixel(0, y)));
    }
    png_write_end(w.png, nullptr);
    if (!out) {
        throw IoError("failed writing PNG data");
    }
}

void writeImage(const Framebuffer& fb, const std::filesystem::path& path) {
    const std::string ext = path.extension().string();
    if (ext != ".ppm" && ext != ".png") {
        throw IoError("unsupported image extension \"" + ext + "\" (use .ppm or .png)");
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot open " + path.string() + " for writing");
    }
    if (ext == ".ppm") {
        writePpm(fb, out);
    } else {
        writePng(fb, out);
    }
    out.close();
    if (!out) {
        throw IoError("failed writing " + path.string());
    }
}

}  // namespace fractalmarch
