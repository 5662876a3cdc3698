#pragma once

#include <filesystem>
#include <fstream>
#include <string>

#include "emofrnn/dataset.hpp"
#include "oracle.hpp"

namespace fixtures {

inline emofrnn::VectorDataset to_dataset(const oracle::Synthetic& s)
{
    emofrnn::VectorDataset ds;
    ds.dimension = s.xs.empty() ? 0 : s.xs.front().size();
    for (std::size_t i = 0; i < s.xs.size(); ++i)
        ds.instances.push_back({"t" + std::to_string(i), s.xs[i], s.ys[i]});
    return ds;
}

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag)
    {
        path_ = std::filesystem::temp_directory_path()
            / ("emofrnn_" + tag + "_" + std::to_string(reinterpret_cast<std::uintptr_t>(this)));
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~TempDir() { std::filesystem::remove_all(path_); }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

inline void write_file(const std::filesystem::path& p, const std::string& text)
{
    std::ofstream out(p, std::ios::binary);
    out << text;
}

inline std::string read_file(const std::filesystem::path& p)
{
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace fixtures
