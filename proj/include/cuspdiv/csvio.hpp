#ifndef CUSPDIV_CSVIO_HPP
#define CUSPDIV_CSVIO_HPP

#include <string>
#include <vector>

namespace cuspdiv {

// Shortest round-trip decimal representation (std::to_chars): deterministic
// and locale-independent, so identical runs produce byte-identical files.
std::string format_double(double v);

std::string join_csv(const std::vector<std::string>& fields, char sep = ',');

void write_text_file(const std::string& path, const std::string& content);

}  // namespace cuspdiv

#endif
