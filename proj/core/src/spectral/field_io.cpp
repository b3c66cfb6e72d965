#include "gibbslab/spectral/field_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <ostream>

#include <fmt/format.h>
#include <fmt/os.h>

#include "gibbslab/support/error.hpp"

namespace gibbslab {

static_assert(std::endian::native == std::endian::little, "field container assumes a little-endian host");

namespace {

constexpr char kMagic[4] = {'T', 'F', 'L', 'D'};

template <class T>
void put(std::ostream& os, T v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <class T>
T get(std::istream& is) {
    T v{};
    is.read(reinterpret_cast<char*>(&v), sizeof v);
    if (!is) throw ConfigError("field container: truncated file");
    return v;
}

}  // namespace

void write_fields(const std::filesystem::path& path, const std::vector<FieldRecord>& records) {
    require(!records.empty(), "write_fields: no records and no grid given");
    write_fields(path, records.front().field.grid(), records);
}

void write_fields(const std::filesystem::path& path, const TorusGrid& g, const std::vector<FieldRecord>& records) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw ConfigError("cannot open " + path.string() + " for writing");
    os.write(kMagic, 4);
    put<std::uint32_t>(os, kFieldFormatVersion);
    put<double>(os, g.L());
    put<std::uint64_t>(os, g.M());
    put<std::uint64_t>(os, records.size());
    for (const auto& r : records) {
        require(r.field.grid() == g, "write_fields: records on different grids");
        put<double>(os, r.tag);
        os.write(reinterpret_cast<const char*>(r.field.values().data()),
                 static_cast<std::streamsize>(g.M() * sizeof(cplx)));
    }
    if (!os) throw ConfigError("write failed for " + path.string());
}

std::vector<FieldRecord> read_fields(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw ConfigError("cannot open " + path.string());
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, kMagic, 4) != 0) throw ConfigError("field container: bad magic");
    auto version = get<std::uint32_t>(is);
    if (version != kFieldFormatVersion)
        throw ConfigError(fmt::format("field container: unsupported version {}", version));
    auto L = get<double>(is);
    auto M = get<std::uint64_t>(is);
    auto count = get<std::uint64_t>(is);
    TorusGrid g(L, M);
    std::vector<FieldRecord> out;
    out.reserve(count);
    for (std::uint64_t i = 0; i < count; ++i) {
        double tag = get<double>(is);
        std::vector<cplx> v(M);
        is.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(M * sizeof(cplx)));
        if (!is) throw ConfigError("field container: truncated record");
        out.push_back({tag, TorusField(g, std::move(v))});
    }
    return out;
}

void write_field(const std::filesystem::path& path, const TorusField& u) { write_fields(path, {{0.0, u}}); }

TorusField read_field(const std::filesystem::path& path) {
    auto recs = read_fields(path);
    require(recs.size() == 1, "read_field: container holds more than one field");
    return std::move(recs.front().field);
}

void write_field_csv(std::ostream& os, const TorusField& u) {
    os << "x,re,im\n";
    for (std::size_t j = 0; j < u.size(); ++j)
        os << fmt::format("{:.17g},{:.17g},{:.17g}\n", u.grid().x(j), u[j].real(), u[j].imag());
}

}  // namespace gibbslab
