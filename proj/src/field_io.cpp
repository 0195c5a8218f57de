// SPDX-License-Identifier: Apache-2.0
#include "ssrf/field_io.hpp"

#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iterator>
#include <random>
#include <string>

#include "json.hpp"

#include "ssrf/errors.hpp"

namespace ssrf {

static_assert(std::endian::native == std::endian::little, "SSTF1 I/O assumes a little-endian host");

namespace {

constexpr char kMagic[8] = {'S', 'S', 'T', 'F', '1', 0, 0, 0};

template <class T>
void put(std::string& out, T v) {
    char buf[sizeof(T)];
    std::memcpy(buf, &v, sizeof(T));
    out.append(buf, sizeof(T));
}

class Reader {
  public:
    explicit Reader(std::string data) : data_(std::move(data)) {}

    template <class T>
    T get() {
        need(sizeof(T));
        T v;
        std::memcpy(&v, data_.data() + pos_, sizeof(T));
        pos_ += sizeof(T);
        return v;
    }
    void doubles(std::vector<double>& out, std::size_t count) {
        if (count > (data_.size() - pos_) / sizeof(double)) throw InvalidParameter("file", "truncated SSTF1 file");
        out.resize(count);
        std::memcpy(out.data(), data_.data() + pos_, count * sizeof(double));
        pos_ += count * sizeof(double);
    }
    bool at_end() const { return pos_ == data_.size(); }

  private:
    void need(std::size_t n) const {
        if (data_.size() - pos_ < n) throw InvalidParameter("file", "truncated SSTF1 file");
    }
    std::string data_;
    std::size_t pos_ = 0;
};

std::string sidecar_json(const FieldGrid& f) {
    nlohmann::ordered_json j;
    j["format"] = "SSTF1";
    j["d"] = f.grid.d;
    j["n"] = f.grid.n;
    j["spacing"] = f.grid.spacing;
    j["n_times"] = f.times.size();
    j["t_start"] = f.times.empty() ? 0.0 : f.times.front();
    j["t_end"] = f.times.empty() ? 0.0 : f.times.back();
    j["params"] = {{"d", f.params.d},         {"eta0", f.params.eta0}, {"eta1", f.params.eta1},
                   {"xi", f.params.xi},       {"mu", f.params.mu},     {"noise_d", f.params.noise_d}};
    j["seed"] = f.seed;
    j["value_layout"] = "float64 row-major [time][site], last axis fastest";
    j["normalization"] = "x = (n spacing)^-d sum_j X_j exp(i k_j s), E|X_j|^2 = (n spacing)^d spd_static(k_j)";
    j["warnings"] = f.warnings;
    return j.dump(2) + "\n";
}

} // namespace

void write_file_atomic(const std::filesystem::path& path, std::string_view bytes) {
    std::random_device rd;
    auto tmp = path;
    tmp += ".tmp" + std::to_string(rd());
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) throw InvalidParameter("out", "cannot open " + tmp.string() + " for writing");
        os.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        os.flush();
        if (!os) {
            std::filesystem::remove(tmp);
            throw InvalidParameter("out", "write to " + tmp.string() + " failed");
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        throw InvalidParameter("out", "cannot rename onto " + path.string() + ": " + ec.message());
    }
}

void write_field(const std::filesystem::path& path, const FieldGrid& f) {
    if (f.values.size() != f.times.size() * f.grid.points())
        throw InvalidParameter("values", "field size does not match grid and times");
    std::string out;
    out.reserve(112 + 8 * (f.times.size() + f.values.size()));
    out.append(kMagic, sizeof(kMagic));
    put<std::uint32_t>(out, static_cast<std::uint32_t>(f.grid.d));
    put<std::uint32_t>(out, static_cast<std::uint32_t>(f.grid.n));
    put<double>(out, f.grid.spacing);
    put<std::uint64_t>(out, f.times.size());
    for (double v : {f.params.eta0, f.params.eta1, f.params.xi, f.params.mu, f.params.noise_d}) put<double>(out, v);
    put<std::uint64_t>(out, f.seed);
    for (double t : f.times) put<double>(out, t);
    out.append(reinterpret_cast<const char*>(f.values.data()), f.values.size() * sizeof(double));
    write_file_atomic(path, out);
    auto side = path;
    side += ".json";
    write_file_atomic(side, sidecar_json(f));
}

FieldGrid read_field(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw InvalidParameter("file", "cannot open " + path.string());
    Reader rd(std::string(std::istreambuf_iterator<char>(is), {}));
    char magic[8];
    for (char& c : magic) c = rd.get<char>();
    if (std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) throw InvalidParameter("file", "not an SSTF1 file");

    FieldGrid f;
    f.grid.d = static_cast<int>(rd.get<std::uint32_t>());
    f.grid.n = static_cast<int>(rd.get<std::uint32_t>());
    f.grid.spacing = rd.get<double>();
    validate(f.grid);
    const auto n_times = rd.get<std::uint64_t>();
    f.params.d = f.grid.d;
    f.params.eta0 = rd.get<double>();
    f.params.eta1 = rd.get<double>();
    f.params.xi = rd.get<double>();
    f.params.mu = rd.get<double>();
    f.params.noise_d = rd.get<double>();
    f.seed = rd.get<std::uint64_t>();
    rd.doubles(f.times, n_times);
    if (n_times > 0 && f.grid.points() > SIZE_MAX / n_times) throw InvalidParameter("file", "corrupt header");
    rd.doubles(f.values, n_times * f.grid.points());
    if (!rd.at_end()) throw InvalidParameter("file", "trailing bytes after SSTF1 payload");
    return f;
}

} // namespace ssrf
