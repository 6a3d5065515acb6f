#pragma once

#include <cctype>
#include <cstdint>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include <fpa/authenticate.hpp>
#include <fpa/errors.hpp>
#include <fpa/plane.hpp>

#ifdef FPA_HAS_ZLIB
#include <zlib.h>
#endif

namespace fpa {

enum class ImageFileFormat {
    pgm_binary,  // binary P5, maxval 255
    png_gray8,   // 8-bit grayscale PNG (requires zlib)
};

namespace detail {

inline std::vector<unsigned char> read_file_bytes(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open '" + path + "' for reading");
    }
    std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                     std::istreambuf_iterator<char>());
    return bytes;
}

inline void write_file_bytes(const std::string& path, const std::vector<unsigned char>& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot open '" + path + "' for writing");
    }
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) {
        throw IoError("short write to '" + path + "'");
    }
}

/// Next whitespace-delimited header token; '#' starts a comment running to
/// end of line.
inline std::string pnm_token(const std::vector<unsigned char>& bytes, std::size_t& pos) {
    while (pos < bytes.size()) {
        const unsigned char b = bytes[pos];
        if (b == '#') {
            while (pos < bytes.size() && bytes[pos] != '\n') {
                ++pos;
            }
        } else if (b == ' ' || b == '\t' || b == '\r' || b == '\n') {
            ++pos;
        } else {
            break;
        }
    }
    std::string tok;
    while (pos < bytes.size() && !std::isspace(bytes[pos]) && bytes[pos] != '#') {
        tok += static_cast<char>(bytes[pos++]);
    }
    return tok;
}

inline int pnm_int(const std::vector<unsigned char>& bytes, std::size_t& pos, const char* what) {
    const std::string tok = pnm_token(bytes, pos);
    if (tok.empty()) {
        throw FormatError(std::string("PGM: missing ") + what);
    }
    for (char ch : tok) {
        if (ch < '0' || ch > '9') {
            throw FormatError(std::string("PGM: ") + what + " '" + tok + "' is not a number");
        }
    }
    const long v = std::strtol(tok.c_str(), nullptr, 10);
    if (v <= 0 || v > 1 << 20) {
        throw FormatError(std::string("PGM: ") + what + " " + tok + " out of range");
    }
    return static_cast<int>(v);
}

inline Image decode_pgm(const std::vector<unsigned char>& bytes) {
    std::size_t pos = 2;  // past "P5"
    const int width = pnm_int(bytes, pos, "width");
    const int height = pnm_int(bytes, pos, "height");
    const int maxval = pnm_int(bytes, pos, "maxval");
    if (maxval != 255) {
        throw FormatError("PGM: maxval " + std::to_string(maxval) +
                          " unsupported, only 8-bit (255) images are accepted");
    }
    if (pos >= bytes.size() || !std::isspace(bytes[pos])) {
        throw FormatError("PGM: expected whitespace after maxval");
    }
    ++pos;
    const std::size_t need = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
    if (bytes.size() < pos + need) {
        throw FormatError("PGM: truncated pixel data");
    }
    Image img(height, width);
    for (int r = 0; r < height; ++r) {
        for (int c = 0; c < width; ++c) {
            img.at(r, c) = bytes[pos++];
        }
    }
    return img;
}

inline std::vector<unsigned char> encode_pgm(const Image& img) {
    const std::string header = "P5\n" + std::to_string(img.width()) + " " +
                               std::to_string(img.height()) + "\n255\n";
    std::vector<unsigned char> bytes(header.begin(), header.end());
    bytes.reserve(bytes.size() + img.size());
    for (int r = 0; r < img.height(); ++r) {
        for (int c = 0; c < img.width(); ++c) {
            bytes.push_back(static_cast<unsigned char>(img.at(r, c)));
        }
    }
    return bytes;
}

#ifdef FPA_HAS_ZLIB

inline constexpr unsigned char kPngSignature[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};

inline void png_put_u32(std::vector<unsigned char>& out, std::uint32_t v) {
    out.push_back(static_cast<unsigned char>(v >> 24));
    out.push_back(static_cast<unsigned char>(v >> 16));
    out.push_back(static_cast<unsigned char>(v >> 8));
    out.push_back(static_cast<unsigned char>(v));
}

inline std::uint32_t png_get_u32(const unsigned char* p) {
    return (static_cast<std::uint32_t>(p[0]) << 24) | (static_cast<std::uint32_t>(p[1]) << 16) |
           (static_cast<std::uint32_t>(p[2]) << 8) | static_cast<std::uint32_t>(p[3]);
}

inline void png_chunk(std::vector<unsigned char>& out, const char type[4],
                      const std::vector<unsigned char>& data) {
    png_put_u32(out, static_cast<std::uint32_t>(data.size()));
    std::vector<unsigned char> crc_buf(type, type + 4);
    crc_buf.insert(crc_buf.end(), data.begin(), data.end());
    out.insert(out.end(), crc_buf.begin(), crc_buf.end());
    const auto crc = static_cast<std::uint32_t>(
        crc32(0L, crc_buf.data(), static_cast<uInt>(crc_buf.size())));
    png_put_u32(out, crc);
}

inline std::vector<unsigned char> encode_png_gray8(const Image& img) {
    std::vector<unsigned char> out(kPngSignature, kPngSignature + 8);

    std::vector<unsigned char> ihdr;
    png_put_u32(ihdr, static_cast<std::uint32_t>(img.width()));
    png_put_u32(ihdr, static_cast<std::uint32_t>(img.height()));
    ihdr.push_back(8);  // bit depth
    ihdr.push_back(0);  // grayscale
    ihdr.push_back(0);  // deflate
    ihdr.push_back(0);  // adaptive filtering
    ihdr.push_back(0);  // no interlace
    png_chunk(out, "IHDR", ihdr);

    std::vector<unsigned char> raw;
    raw.reserve((static_cast<std::size_t>(img.width()) + 1) * img.height());
    for (int r = 0; r < img.height(); ++r) {
        raw.push_back(0);  // filter type none
        for (int c = 0; c < img.width(); ++c) {
            raw.push_back(static_cast<unsigned char>(img.at(r, c)));
        }
    }
    uLongf bound = compressBound(static_cast<uLong>(raw.size()));
    std::vector<unsigned char> compressed(bound);
    if (compress2(compressed.data(), &bound, raw.data(), static_cast<uLong>(raw.size()),
                  Z_DEFAULT_COMPRESSION) != Z_OK) {
        throw IoError("PNG: deflate failed");
    }
    compressed.resize(bound);
    png_chunk(out, "IDAT", compressed);
    png_chunk(out, "IEND", {});
    return out;
}

inline int png_paeth(int a, int b, int c) {
    const int p = a + b - c;
    const int pa = std::abs(p - a);
    const int pb = std::abs(p - b);
    const int pc = std::abs(p - c);
    if (pa <= pb && pa <= pc) {
        return a;
    }
    return pb <= pc ? b : c;
}

inline Image decode_png_gray8(const std::vector<unsigned char>& bytes) {
    if (bytes.size() < 8 || std::memcmp(bytes.data(), kPngSignature, 8) != 0) {
        throw FormatError("PNG: bad signature");
    }
    std::size_t pos = 8;
    bool have_header = false;
    std::uint32_t width = 0, height = 0;
    std::vector<unsigned char> idat;
    while (pos + 8 <= bytes.size()) {
        const std::uint32_t len = png_get_u32(&bytes[pos]);
        if (pos + 12 + len > bytes.size()) {
            throw FormatError("PNG: truncated chunk");
        }
        const char* type = reinterpret_cast<const char*>(&bytes[pos + 4]);
        const unsigned char* data = &bytes[pos + 8];
        const std::uint32_t stored_crc = png_get_u32(&bytes[pos + 8 + len]);
        const auto crc = static_cast<std::uint32_t>(
            crc32(crc32(0L, &bytes[pos + 4], 4), data, static_cast<uInt>(len)));
        if (crc != stored_crc) {
            throw FormatError("PNG: chunk checksum mismatch");
        }
        if (std::memcmp(type, "IHDR", 4) == 0) {
            if (len != 13) {
                throw FormatError("PNG: malformed IHDR");
            }
            width = png_get_u32(data);
            height = png_get_u32(data + 4);
            if (data[8] != 8) {
                throw FormatError("PNG: only bit depth 8 is supported");
            }
            if (data[9] != 0) {
                throw FormatError("PNG: only grayscale (color type 0) is supported");
            }
            if (data[12] != 0) {
                throw FormatError("PNG: interlaced images are not supported");
            }
            have_header = true;
        } else if (std::memcmp(type, "IDAT", 4) == 0) {
            idat.insert(idat.end(), data, data + len);
        } else if (std::memcmp(type, "IEND", 4) == 0) {
            break;
        }
        pos += 12 + len;
    }
    if (!have_header || width == 0 || height == 0) {
        throw FormatError("PNG: missing or empty IHDR");
    }
    if (idat.empty()) {
        throw FormatError("PNG: no pixel data");
    }

    const std::size_t stride = static_cast<std::size_t>(width) + 1;
    std::vector<unsigned char> raw(stride * height);
    uLongf raw_len = static_cast<uLongf>(raw.size());
    if (uncompress(raw.data(), &raw_len, idat.data(), static_cast<uLong>(idat.size())) != Z_OK ||
        raw_len != raw.size()) {
        throw FormatError("PNG: corrupt pixel data");
    }

    Image img(static_cast<int>(height), static_cast<int>(width));
    std::vector<unsigned char> prev(width, 0);
    std::vector<unsigned char> line(width, 0);
    for (std::uint32_t r = 0; r < height; ++r) {
        const unsigned char filter = raw[r * stride];
        const unsigned char* src = &raw[r * stride + 1];
        for (std::uint32_t c = 0; c < width; ++c) {
            const int left = c > 0 ? line[c - 1] : 0;
            const int up = prev[c];
            const int up_left = c > 0 ? prev[c - 1] : 0;
            int v = src[c];
            switch (filter) {
                case 0: break;
                case 1: v += left; break;
                case 2: v += up; break;
                case 3: v += (left + up) / 2; break;
                case 4: v += png_paeth(left, up, up_left); break;
                default: throw FormatError("PNG: unknown scanline filter");
            }
            line[c] = static_cast<unsigned char>(v & 0xff);
            img.at(static_cast<int>(r), static_cast<int>(c)) = line[c];
        }
        prev = line;
    }
    return img;
}

#endif  // FPA_HAS_ZLIB

}  // namespace detail

/// Read a grayscale image. The format is detected from the leading bytes;
/// binary P5 PGM with maxval 255 is always supported, 8-bit grayscale PNG
/// when the library was built with zlib.
inline Image read_image(const std::string& path) {
    const std::vector<unsigned char> bytes = detail::read_file_bytes(path);
    if (bytes.size() >= 2 && bytes[0] == 'P' && bytes[1] == '5') {
        return detail::decode_pgm(bytes);
    }
    if (bytes.size() >= 2 && bytes[0] == 'P' && bytes[1] >= '1' && bytes[1] <= '7') {
        throw FormatError("only binary P5 PGM is supported, got P" +
                          std::string(1, static_cast<char>(bytes[1])));
    }
#ifdef FPA_HAS_ZLIB
    if (bytes.size() >= 8 && std::memcmp(bytes.data(), detail::kPngSignature, 8) == 0) {
        return detail::decode_png_gray8(bytes);
    }
#else
    if (bytes.size() >= 4 && bytes[1] == 'P' && bytes[2] == 'N' && bytes[3] == 'G') {
        throw FormatError("PNG support is not enabled in this build");
    }
#endif
    throw FormatError("'" + path + "' is not a supported image format");
}

/// Write an 8-bit grayscale image. PGM output is canonical and byte-stable:
/// "P5\n<w> <h>\n255\n" followed by row-major pixels.
inline void write_image(const Image& img, const std::string& path,
                        ImageFileFormat format = ImageFileFormat::pgm_binary) {
    require_byte_range(img, "write_image");
    switch (format) {
        case ImageFileFormat::pgm_binary:
            detail::write_file_bytes(path, detail::encode_pgm(img));
            return;
        case ImageFileFormat::png_gray8:
#ifdef FPA_HAS_ZLIB
            detail::write_file_bytes(path, detail::encode_png_gray8(img));
            return;
#else
            throw FormatError("PNG support is not enabled in this build");
#endif
    }
    throw ParameterError("write_image: unknown format");
}

/// Render the tamper map as a binary image: 255 at suspicious pixels, 0
/// elsewhere. The format is chosen from the file extension.
inline void render_tamper_map(const VerificationReport& report, const std::string& path) {
    Image img(report.tamper_map.height(), report.tamper_map.width(), 0);
    for (int r = 0; r < img.height(); ++r) {
        for (int c = 0; c < img.width(); ++c) {
            img.at(r, c) = report.tamper_map.at(r, c) ? 255 : 0;
        }
    }
    const bool png = path.size() > 4 && path.compare(path.size() - 4, 4, ".png") == 0;
    write_image(img, path, png ? ImageFileFormat::png_gray8 : ImageFileFormat::pgm_binary);
}

}  // namespace fpa
