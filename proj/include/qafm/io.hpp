#pragma once

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <iterator>
#include <string>
#include <string_view>
#include <system_error>

#include "qafm/errors.hpp"

namespace qafm::io {

/// Shortest decimal text that parses back to the same double. Non-finite values become "nan"/"inf".
inline std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view text) {
    double v = 0.0;
    const auto* end = text.data() + text.size();
    const auto res = std::from_chars(text.data(), end, v);
    if (res.ec != std::errc() || res.ptr != end) {
        throw ValidationError("cli-io", "not a number: '" + std::string(text) + "'");
    }
    return v;
}

/// Write content to path through a sibling temporary file and a rename, so the
/// declared path never holds a partial file.
inline void write_atomic(const std::filesystem::path& path, std::string_view content) {
    namespace fs = std::filesystem;
    const fs::path tmp = path.string() + ".tmp-partial";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cli-io", "cannot open " + tmp.string() + " for writing");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) {
            out.close();
            std::error_code ec;
            fs::remove(tmp, ec);
            throw IoError("cli-io", "write failed for " + tmp.string());
        }
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw IoError("cli-io", "cannot rename onto " + path.string());
    }
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cli-io", "cannot open " + path.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

/// Appends comma-separated fields to a row; finish with end_row().
class CsvWriter {
public:
    CsvWriter& header(std::initializer_list<std::string_view> names) {
        for (auto n : names) field(n);
        return end_row();
    }
    CsvWriter& comment(std::string_view text) {
        out_ += "# ";
        out_ += text;
        out_ += '\n';
        return *this;
    }
    CsvWriter& field(std::string_view text) {
        if (!first_) out_ += ',';
        out_ += text;
        first_ = false;
        return *this;
    }
    CsvWriter& field(double v) { return field(format_double(v)); }
    CsvWriter& field_int(long long v) { return field(std::to_string(v)); }
    CsvWriter& end_row() {
        out_ += '\n';
        first_ = true;
        return *this;
    }
    const std::string& str() const { return out_; }

private:
    std::string out_;
    bool first_ = true;
};

} // namespace qafm::io
