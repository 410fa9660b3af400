#pragma once

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "flowmine/pipeline.hpp"

namespace fs = std::filesystem;

inline fs::path test_dir() { return FLOWMINE_TEST_DIR; }
inline fs::path data_dir() { return test_dir() / "data"; }

inline std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

inline void spit(const fs::path& p, const std::string& text) {
    fs::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary);
    out << text;
}

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        static std::mt19937_64 rng{std::random_device{}()};
        path_ = fs::temp_directory_path() / ("flowmine-" + tag + "-" + std::to_string(rng()));
        fs::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const fs::path& path() const { return path_; }
    fs::path operator/(const std::string& name) const { return path_ / name; }

private:
    fs::path path_;
};

inline flowmine::Testbench testbench_from(const std::string& csv) {
    std::istringstream in(csv);
    return flowmine::read_testbench(in);
}

inline flowmine::Design fixture_design(const std::string& name) {
    return flowmine::load_design_file((data_dir() / name / "design.fm").string());
}

inline flowmine::Testbench fixture_testbench(const std::string& name) {
    return flowmine::read_testbench_file(data_dir() / name / "testbench.csv");
}
