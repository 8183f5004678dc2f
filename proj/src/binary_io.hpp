#pragma once

// Little-endian binary file helpers shared by the dataset and model writers.

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>

#include "amc/types.hpp"

namespace amc::detail {

static_assert(std::endian::native == std::endian::little,
              "file writers assume a little-endian host");

class BinWriter {
public:
    explicit BinWriter(const std::string& path) : out_(path, std::ios::binary) {
        if (!out_) throw config_error("cannot open for writing: " + path);
    }

    void bytes(const void* p, std::size_t n) {
        out_.write(static_cast<const char*>(p), static_cast<std::streamsize>(n));
    }
    template <typename T>
    void pod(T v) {
        bytes(&v, sizeof(T));
    }
    void str8(const std::string& s) {
        if (s.size() > 255) throw config_error("string field too long: " + s);
        pod<std::uint8_t>(static_cast<std::uint8_t>(s.size()));
        bytes(s.data(), s.size());
    }
    void str16(const std::string& s) {
        if (s.size() > 65535) throw config_error("string field too long");
        pod<std::uint16_t>(static_cast<std::uint16_t>(s.size()));
        bytes(s.data(), s.size());
    }
    void close(const std::string& path) {
        out_.flush();
        if (!out_) throw config_error("write failed: " + path);
        out_.close();
    }

private:
    std::ofstream out_;
};

class BinReader {
public:
    explicit BinReader(const std::string& path) : in_(path, std::ios::binary), path_(path) {
        if (!in_) throw config_error("cannot open for reading: " + path);
    }

    void bytes(void* p, std::size_t n) {
        in_.read(static_cast<char*>(p), static_cast<std::streamsize>(n));
        if (!in_) throw config_error("truncated file: " + path_);
    }
    template <typename T>
    T pod() {
        T v;
        bytes(&v, sizeof(T));
        return v;
    }
    std::string str8() {
        const auto n = pod<std::uint8_t>();
        std::string s(n, '\0');
        if (n > 0) bytes(s.data(), n);
        return s;
    }
    std::string str16() {
        const auto n = pod<std::uint16_t>();
        std::string s(n, '\0');
        if (n > 0) bytes(s.data(), n);
        return s;
    }
    void expect_magic(const char (&magic)[5]) {
        char got[4];
        bytes(got, 4);
        if (std::memcmp(got, magic, 4) != 0) {
            throw config_error("bad magic in " + path_ + ", expected " + magic);
        }
    }

private:
    std::ifstream in_;
    std::string path_;
};

}  // namespace amc::detail
