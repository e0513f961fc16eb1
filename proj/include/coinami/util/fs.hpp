#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace coinami::util {

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline void write_file(const std::string& path, std::string_view data) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out.write(data.data(), static_cast<std::streamsize>(data.size()));
}

inline void append_file(const std::string& path, std::string_view data) {
    std::ofstream out(path, std::ios::binary | std::ios::app);
    if (!out) throw std::runtime_error("cannot append file: " + path);
    out.write(data.data(), static_cast<std::streamsize>(data.size()));
}

inline bool file_exists(const std::string& path) {
    return std::filesystem::exists(path);
}

inline void ensure_dir(const std::string& path) {
    std::filesystem::create_directories(path);
}

}  // namespace coinami::util
