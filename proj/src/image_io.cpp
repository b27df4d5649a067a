#include "aquasi/image_io.hpp"

#include "aquasi/error.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>

namespace aquasi::io {

namespace {

static_assert(sizeof(float) == 4 && std::numeric_limits<float>::is_iec559);

constexpr std::size_t kMaxDimension = 1u << 16;

std::uint32_t to_little_endian(std::uint32_t v) {
    if constexpr (std::endian::native == std::endian::big) {
        v = ((v & 0xFF) << 24) | ((v & 0xFF00) << 8) | ((v >> 8) & 0xFF00) | (v >> 24);
    }
    return v;
}

void check_dims(std::size_t w, std::size_t h, std::size_t c) {
    if (w == 0 || h == 0 || c == 0 || w > kMaxDimension || h > kMaxDimension || c > 64) {
        throw Error(ErrorKind::MalformedHeader, "implausible image dimensions " +
                                                    std::to_string(w) + "x" + std::to_string(h) +
                                                    "x" + std::to_string(c));
    }
}

// Reads one whitespace-delimited PNM header token, skipping '#' comments.
std::string pnm_token(std::istream& in) {
    std::string tok;
    int ch = in.get();
    while (ch != EOF) {
        if (ch == '#') {
            while (ch != EOF && ch != '\n' && ch != '\r') ch = in.get();
        } else if (std::isspace(ch)) {
            ch = in.get();
        } else {
            break;
        }
    }
    while (ch != EOF && !std::isspace(ch) && ch != '#') {
        tok.push_back(static_cast<char>(ch));
        ch = in.get();
    }
    if (tok.empty()) throw Error(ErrorKind::MalformedHeader, "PNM header ended early");
    if (ch == '#') in.unget();
    return tok;
}

std::size_t parse_unsigned(const std::string& tok, const char* what) {
    if (tok.empty() || !std::all_of(tok.begin(), tok.end(), [](unsigned char c) {
            return std::isdigit(c);
        }) || tok.size() > 9) {
        throw Error(ErrorKind::MalformedHeader, std::string("bad ") + what + " '" + tok + "'");
    }
    return static_cast<std::size_t>(std::stoul(tok));
}

}  // namespace

MultiChannelImage read_f32(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw Error(ErrorKind::MalformedHeader, "empty F32 stream");
    std::istringstream hs(line);
    std::string magic;
    long long w = -1, h = -1, c = -1;
    hs >> magic >> w >> h >> c;
    if (magic != "F32") throw Error(ErrorKind::UnsupportedFormat, "not an F32 stream");
    std::string trailing;
    if (hs.fail() || (hs >> trailing) || w <= 0 || h <= 0 || c <= 0) {
        throw Error(ErrorKind::MalformedHeader, "bad F32 header '" + line + "'");
    }
    const auto width = static_cast<std::size_t>(w);
    const auto height = static_cast<std::size_t>(h);
    const auto chans = static_cast<std::size_t>(c);
    check_dims(width, height, chans);

    const std::size_t n = width * height;
    std::vector<Image> channels;
    channels.reserve(chans);
    std::vector<std::array<char, 4>> raw(n);
    for (std::size_t ch = 0; ch < chans; ++ch) {
        in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(n * 4));
        if (static_cast<std::size_t>(in.gcount()) != n * 4) {
            throw Error(ErrorKind::TruncatedPayload, "F32 payload shorter than header promises");
        }
        std::vector<double> data(n);
        for (std::size_t i = 0; i < n; ++i) {
            std::uint32_t bits;
            std::memcpy(&bits, raw[i].data(), 4);
            const float v = std::bit_cast<float>(to_little_endian(bits));
            if (!std::isfinite(v)) {
                throw Error(ErrorKind::MalformedHeader, "F32 payload contains a non-finite sample");
            }
            data[i] = v;
        }
        channels.emplace_back(width, height, std::move(data));
    }
    return MultiChannelImage(std::move(channels));
}

void write_f32(std::ostream& out, const MultiChannelImage& img) {
    out << "F32 " << img.width() << ' ' << img.height() << ' ' << img.channels() << '\n';
    std::vector<char> buf(img.width() * img.height() * 4);
    for (const Image& ch : img) {
        for (std::size_t i = 0; i < ch.size(); ++i) {
            const auto bits = to_little_endian(std::bit_cast<std::uint32_t>(static_cast<float>(ch[i])));
            std::memcpy(buf.data() + 4 * i, &bits, 4);
        }
        out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    }
    if (!out) throw Error(ErrorKind::Io, "failed writing F32 stream");
}

MultiChannelImage read_pnm(std::istream& in) {
    std::array<char, 2> magic{};
    in.read(magic.data(), 2);
    if (in.gcount() != 2 || magic[0] != 'P' || (magic[1] != '5' && magic[1] != '6')) {
        throw Error(ErrorKind::UnsupportedFormat, "only binary P5/P6 PNM is supported");
    }
    const std::size_t chans = magic[1] == '5' ? 1 : 3;
    const std::size_t width = parse_unsigned(pnm_token(in), "width");
    const std::size_t height = parse_unsigned(pnm_token(in), "height");
    const std::size_t maxval = parse_unsigned(pnm_token(in), "maxval");
    check_dims(width, height, chans);
    if (maxval == 0 || maxval > 65535) {
        throw Error(ErrorKind::MalformedHeader, "maxval " + std::to_string(maxval) + " out of range");
    }
    // pnm_token consumed exactly one whitespace byte after maxval.

    const std::size_t bytes_per_sample = maxval > 255 ? 2 : 1;
    const std::size_t n = width * height;
    std::vector<unsigned char> raw(n * chans * bytes_per_sample);
    in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    if (static_cast<std::size_t>(in.gcount()) != raw.size()) {
        throw Error(ErrorKind::TruncatedPayload, "PNM payload shorter than header promises");
    }

    const double scale = 1.0 / static_cast<double>(maxval);
    std::vector<Image> channels(chans, Image(width, height));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t c = 0; c < chans; ++c) {
            const std::size_t s = (i * chans + c) * bytes_per_sample;
            std::size_t v = raw[s];
            if (bytes_per_sample == 2) v = (v << 8) | raw[s + 1];
            if (v > maxval) {
                throw Error(ErrorKind::MalformedHeader, "PNM sample exceeds maxval");
            }
            channels[c][i] = static_cast<double>(v) * scale;
        }
    }
    return MultiChannelImage(std::move(channels));
}

void write_pnm(std::ostream& out, const MultiChannelImage& img, int maxval) {
    if (img.channels() != 1 && img.channels() != 3) {
        throw Error(ErrorKind::UnsupportedFormat,
                    "PNM needs 1 or 3 channels, got " + std::to_string(img.channels()));
    }
    if (maxval < 1 || maxval > 65535) {
        throw Error(ErrorKind::InvalidArgument, "PNM maxval must be in [1, 65535]");
    }
    const std::size_t chans = img.channels();
    out << (chans == 1 ? "P5" : "P6") << '\n'
        << img.width() << ' ' << img.height() << '\n'
        << maxval << '\n';
    const std::size_t bytes_per_sample = maxval > 255 ? 2 : 1;
    const std::size_t n = img.width() * img.height();
    std::vector<unsigned char> raw(n * chans * bytes_per_sample);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t c = 0; c < chans; ++c) {
            const double v = std::clamp(img[c][i], 0.0, 1.0);
            const auto q = static_cast<unsigned>(std::lround(v * maxval));
            const std::size_t s = (i * chans + c) * bytes_per_sample;
            if (bytes_per_sample == 2) {
                raw[s] = static_cast<unsigned char>(q >> 8);
                raw[s + 1] = static_cast<unsigned char>(q & 0xFF);
            } else {
                raw[s] = static_cast<unsigned char>(q);
            }
        }
    }
    out.write(reinterpret_cast<const char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    if (!out) throw Error(ErrorKind::Io, "failed writing PNM stream");
}

MultiChannelImage read_image(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Io, "cannot open '" + path.string() + "' for reading");
    const int first = in.peek();
    if (first == 'P') return read_pnm(in);
    if (first == 'F') return read_f32(in);
    throw Error(ErrorKind::UnsupportedFormat, "unrecognised image format in '" + path.string() + "'");
}

void write_image(const std::filesystem::path& path, const MultiChannelImage& img, Format format,
                 int pnm_maxval) {
    if (format == Format::Auto) {
        std::string ext = path.extension().string();
        std::transform(ext.begin(), ext.end(), ext.begin(),
                       [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
        format = (ext == ".pgm" || ext == ".ppm" || ext == ".pnm") ? Format::Pnm : Format::F32;
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::Io, "cannot open '" + path.string() + "' for writing");
    if (format == Format::Pnm) {
        write_pnm(out, img, pnm_maxval);
    } else {
        write_f32(out, img);
    }
}

}  // namespace aquasi::io
