#pragma once

#include <filesystem>
#include <string>

#include "epinet/scales.hpp"
#include "epinet/text.hpp"

namespace epitest {

inline const epinet::ScaleRepository& scales() {
    static const epinet::ScaleRepository repo = epinet::ScaleRepository::load(EPN_TEST_SCALES);
    return repo;
}

// Per-process scratch directory under the test working directory.
inline std::string tmp_path(const std::string& name) {
    static const std::filesystem::path dir = [] {
        std::filesystem::path d = "test_tmp";
        std::filesystem::create_directories(d);
        return d;
    }();
    return (dir / name).string();
}

inline std::string write_tmp(const std::string& name, const std::string& content) {
    const std::string path = tmp_path(name);
    epinet::write_file(path, content);
    return path;
}

} // namespace epitest
