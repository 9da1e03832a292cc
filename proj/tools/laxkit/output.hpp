#pragma once

#include <string>
#include <vector>

namespace laxkit::cli {

struct OutputFile {
    std::string name;
    std::string body;
};

// Writes every file to a temporary name first and renames only after all
// writes succeeded, so a failed run leaves no partial output.
void write_all(const std::string& dir, const std::vector<OutputFile>& files);

}  // namespace laxkit::cli
