#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "hashnets/ahcl/parser.hpp"

namespace hashnets::testing {

inline std::filesystem::path fixture_dir() { return HASHNETS_FIXTURES; }

inline std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline ahcl::Component load(const std::string& rel) {
    return ahcl::parse_configuration(slurp(fixture_dir() / rel));
}

// Sorted relative paths of every .ahcl fixture under `sub` ("" for all).
inline std::vector<std::string> fixtures(const std::string& sub = "") {
    std::vector<std::string> out;
    for (const auto& e : std::filesystem::recursive_directory_iterator(fixture_dir() / sub)) {
        if (e.path().extension() == ".ahcl") {
            out.push_back(std::filesystem::relative(e.path(), fixture_dir()).generic_string());
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace hashnets::testing
