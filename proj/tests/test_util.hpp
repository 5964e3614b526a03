#pragma once

#include <unistd.h>

#include <atomic>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace entsparse::testing {

/// Scratch directory removed on destruction.
class TempDir {
public:
    TempDir() {
        static std::atomic<int> counter{0};
        path_ = std::filesystem::temp_directory_path() /
                ("entsparse_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

inline void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

/// Random text over a small vocabulary so that term collisions are common.
inline std::string random_text(std::mt19937_64& rng, std::size_t min_words, std::size_t max_words,
                               std::size_t vocab = 30) {
    std::uniform_int_distribution<std::size_t> len(min_words, max_words);
    std::uniform_int_distribution<std::size_t> word(0, vocab - 1);
    std::string text;
    for (std::size_t n = len(rng), i = 0; i < n; ++i) {
        if (i) text += ' ';
        text += "w" + std::to_string(word(rng));
    }
    return text;
}

}  // namespace entsparse::testing
