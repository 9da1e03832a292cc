#include "output.hpp"

#include "laxkit/error.hpp"

#include <filesystem>
#include <fstream>

namespace fs = std::filesystem;

namespace laxkit::cli {

void write_all(const std::string& dir, const std::vector<OutputFile>& files) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw UsageError("cannot create output directory " + dir + ": " + ec.message());
    std::vector<std::pair<fs::path, fs::path>> staged;
    auto discard = [&] {
        for (const auto& [tmp, dst] : staged) fs::remove(tmp, ec);
    };
    for (const auto& f : files) {
        fs::path dst = fs::path(dir) / f.name;
        fs::path tmp = fs::path(dir) / ("." + f.name + ".part");
        std::ofstream out(tmp, std::ios::binary);
        out << f.body;
        out.close();
        staged.emplace_back(tmp, dst);
        if (!out) {
            discard();
            throw Error("cannot write " + dst.string());
        }
    }
    for (const auto& [tmp, dst] : staged) fs::rename(tmp, dst);
}

}  // namespace laxkit::cli
