#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "xbm/common.hpp"

namespace xbm::io {

// Little-endian fixed-width binary primitives for the versioned containers.

inline void write_u8(std::ostream& os, std::uint8_t v) {
    os.put(static_cast<char>(v));
}

inline void write_u32(std::ostream& os, std::uint32_t v) {
    char buf[4];
    for (int k = 0; k < 4; ++k) buf[k] = static_cast<char>((v >> (8 * k)) & 0xff);
    os.write(buf, 4);
}

inline void write_u64(std::ostream& os, std::uint64_t v) {
    char buf[8];
    for (int k = 0; k < 8; ++k) buf[k] = static_cast<char>((v >> (8 * k)) & 0xff);
    os.write(buf, 8);
}

inline void write_f64(std::ostream& os, double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof(bits));
    write_u64(os, bits);
}

inline void write_string(std::ostream& os, const std::string& s) {
    write_u64(os, s.size());
    os.write(s.data(), static_cast<std::streamsize>(s.size()));
}

inline void write_f64_vector(std::ostream& os, const std::vector<double>& v) {
    write_u64(os, v.size());
    for (double x : v) write_f64(os, x);
}

inline std::uint8_t read_u8(std::istream& is) {
    int c = is.get();
    if (c == EOF) throw FormatError("unexpected end of stream");
    return static_cast<std::uint8_t>(c);
}

inline std::uint32_t read_u32(std::istream& is) {
    char buf[4];
    if (!is.read(buf, 4)) throw FormatError("unexpected end of stream");
    std::uint32_t v = 0;
    for (int k = 0; k < 4; ++k) v |= static_cast<std::uint32_t>(static_cast<unsigned char>(buf[k])) << (8 * k);
    return v;
}

inline std::uint64_t read_u64(std::istream& is) {
    char buf[8];
    if (!is.read(buf, 8)) throw FormatError("unexpected end of stream");
    std::uint64_t v = 0;
    for (int k = 0; k < 8; ++k) v |= static_cast<std::uint64_t>(static_cast<unsigned char>(buf[k])) << (8 * k);
    return v;
}

inline double read_f64(std::istream& is) {
    std::uint64_t bits = read_u64(is);
    double v;
    std::memcpy(&v, &bits, sizeof(v));
    return v;
}

inline std::string read_string(std::istream& is) {
    std::uint64_t n = read_u64(is);
    std::string s(n, '\0');
    if (n > 0 && !is.read(s.data(), static_cast<std::streamsize>(n)))
        throw FormatError("unexpected end of stream");
    return s;
}

inline std::vector<double> read_f64_vector(std::istream& is) {
    std::uint64_t n = read_u64(is);
    std::vector<double> v(n);
    for (auto& x : v) x = read_f64(is);
    return v;
}

inline void expect_magic(std::istream& is, const char (&magic)[5]) {
    char buf[4];
    if (!is.read(buf, 4) || std::memcmp(buf, magic, 4) != 0)
        throw FormatError(std::string("bad magic, expected ") + magic);
}

inline void write_magic(std::ostream& os, const char (&magic)[5]) {
    os.write(magic, 4);
}

} // namespace xbm::io
