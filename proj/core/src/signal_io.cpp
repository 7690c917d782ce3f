#include "footfall/signal_io.hpp"

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <limits>
#include <vector>

namespace footfall {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == ',' || c == ';' || c == '\t' || c == ' ') {
            if (!cur.empty()) { fields.push_back(cur); cur.clear(); }
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    if (!cur.empty()) fields.push_back(cur);
    return fields;
}

bool parse_double(const std::string& s, double& out) {
    char* end = nullptr;
    errno = 0;
    out = std::strtod(s.c_str(), &end);
    return end == s.c_str() + s.size() && end != s.c_str() && errno != ERANGE;
}

Signal load_csv(const std::filesystem::path& path, double sample_rate_hz) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());

    Signal sig;
    sig.sample_rate_hz = sample_rate_hz;
    std::string line;
    std::size_t row = 0;
    bool first_content_line = true;
    int value_column = -1; // 0 = single column, 1 = second column after an index

    while (std::getline(in, line)) {
        ++row;
        auto fields = split_fields(line);
        if (fields.empty()) continue;

        if (first_content_line) {
            double v;
            bool numeric = parse_double(fields.back(), v);
            if (!numeric) continue; // header line
            first_content_line = false;
            value_column = fields.size() >= 2 ? 1 : 0;
        }

        if (static_cast<int>(fields.size()) <= value_column)
            throw ParseError("row " + std::to_string(row) + " of " + path.string() +
                             ": expected " + std::to_string(value_column + 1) + " column(s)");
        double v;
        if (!parse_double(fields[value_column], v))
            throw ParseError("row " + std::to_string(row) + " of " + path.string() +
                             ": non-numeric value '" + fields[value_column] + "'");
        sig.samples.push_back(v);
    }
    if (sig.samples.empty())
        throw ParseError(path.string() + ": no numeric rows found");
    validate(sig);
    return sig;
}

std::uint32_t read_u32(const unsigned char* p) {
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}
std::uint16_t read_u16(const unsigned char* p) {
    return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

Signal load_wav(const std::filesystem::path& path, double sample_rate_hz) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                     std::istreambuf_iterator<char>());
    if (bytes.size() < 44 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
        std::memcmp(bytes.data() + 8, "WAVE", 4) != 0)
        throw ParseError(path.string() + ": not a RIFF/WAVE file");

    std::uint16_t channels = 0, bits = 0, format_tag = 0;
    std::uint32_t header_rate = 0;
    const unsigned char* data = nullptr;
    std::uint32_t data_len = 0;

    std::size_t pos = 12;
    while (pos + 8 <= bytes.size()) {
        const unsigned char* chunk = bytes.data() + pos;
        std::uint32_t chunk_len = read_u32(chunk + 4);
        if (std::memcmp(chunk, "fmt ", 4) == 0 && chunk_len >= 16) {
            format_tag = read_u16(chunk + 8);
            channels = read_u16(chunk + 10);
            header_rate = read_u32(chunk + 12);
            bits = read_u16(chunk + 22);
        } else if (std::memcmp(chunk, "data", 4) == 0) {
            data = chunk + 8;
            data_len = std::min<std::uint32_t>(chunk_len, static_cast<std::uint32_t>(bytes.size() - pos - 8));
        }
        pos += 8 + chunk_len + (chunk_len & 1);
    }

    if (format_tag != 1) throw ParseError(path.string() + ": only PCM WAV is supported");
    if (channels != 1)
        throw ParseError(path.string() + ": expected mono, got " + std::to_string(channels) + " channels");
    if (bits != 8 && bits != 16 && bits != 24)
        throw ParseError(path.string() + ": unsupported bit depth " + std::to_string(bits));
    if (!data || data_len == 0) throw ParseError(path.string() + ": no data chunk");

    Signal sig;
    sig.sample_rate_hz = sample_rate_hz > 0.0 ? sample_rate_hz : static_cast<double>(header_rate);
    const std::size_t stride = bits / 8;
    const std::size_t n = data_len / stride;
    sig.samples.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const unsigned char* s = data + i * stride;
        double v = 0.0;
        if (bits == 8) {
            v = (static_cast<int>(s[0]) - 128) / 128.0;
        } else if (bits == 16) {
            std::int16_t raw = static_cast<std::int16_t>(s[0] | (s[1] << 8));
            v = raw / 32768.0;
        } else {
            std::int32_t raw = s[0] | (s[1] << 8) | (s[2] << 16);
            if (raw & 0x800000) raw |= ~0xFFFFFF; // sign extend
            v = raw / 8388608.0;
        }
        sig.samples.push_back(v);
    }
    validate(sig);
    return sig;
}

void write_u32(std::ofstream& out, std::uint32_t v) {
    unsigned char b[4] = {static_cast<unsigned char>(v & 0xFF),
                          static_cast<unsigned char>((v >> 8) & 0xFF),
                          static_cast<unsigned char>((v >> 16) & 0xFF),
                          static_cast<unsigned char>((v >> 24) & 0xFF)};
    out.write(reinterpret_cast<const char*>(b), 4);
}
void write_u16(std::ofstream& out, std::uint16_t v) {
    unsigned char b[2] = {static_cast<unsigned char>(v & 0xFF),
                          static_cast<unsigned char>((v >> 8) & 0xFF)};
    out.write(reinterpret_cast<const char*>(b), 2);
}

} // namespace

SignalFormat signal_format_from_path(const std::filesystem::path& path) {
    auto ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    if (ext == ".csv" || ext == ".txt") return SignalFormat::csv;
    if (ext == ".wav") return SignalFormat::wav;
    throw ConfigError("cannot infer signal format from '" + path.string() + "'");
}

Signal load_signal(const std::filesystem::path& path, SignalFormat format, double sample_rate_hz) {
    if (!std::filesystem::exists(path))
        throw IoError("input file does not exist: " + path.string());
    return format == SignalFormat::csv ? load_csv(path, sample_rate_hz)
                                       : load_wav(path, sample_rate_hz);
}

void write_signal_csv(const Signal& sig, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    out.precision(std::numeric_limits<double>::max_digits10);
    for (double v : sig.samples) out << v << '\n';
    if (!out) throw IoError("write failed: " + path.string());
}

void write_signal_wav16(const Signal& sig, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    const std::uint32_t n = static_cast<std::uint32_t>(sig.samples.size());
    const std::uint32_t rate = static_cast<std::uint32_t>(std::lround(sig.sample_rate_hz));
    out.write("RIFF", 4);
    write_u32(out, 36 + 2 * n);
    out.write("WAVE", 4);
    out.write("fmt ", 4);
    write_u32(out, 16);
    write_u16(out, 1);  // PCM
    write_u16(out, 1);  // mono
    write_u32(out, rate);
    write_u32(out, rate * 2);
    write_u16(out, 2);
    write_u16(out, 16);
    out.write("data", 4);
    write_u32(out, 2 * n);
    for (double v : sig.samples) {
        double c = std::clamp(v, -1.0, 1.0);
        auto raw = static_cast<std::int16_t>(std::lround(c * 32767.0));
        write_u16(out, static_cast<std::uint16_t>(raw));
    }
    if (!out) throw IoError("write failed: " + path.string());
}

} // namespace footfall
