// Binary layout: 8-byte magic, int32 n, int32 shape[3], float64 origin[3],
// float64 h_x, float64 h_t, uint64 count, then count float64 values in
// row-major order (time fastest). Host byte order is little-endian on all
// supported targets.
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "parawt/error.hpp"
#include "parawt/grid.hpp"

namespace parawt
{
namespace
{
constexpr char kMagic[8] = {'P', 'W', 'F', 'I', 'E', 'L', 'D', '1'};

template <class T>
void put(std::vector<std::uint8_t>& out, T v)
{
    auto const* p = reinterpret_cast<std::uint8_t const*>(&v);
    out.insert(out.end(), p, p + sizeof(T));
}

template <class T>
T take(std::span<std::uint8_t const> bytes, std::size_t& pos)
{
    require(pos + sizeof(T) <= bytes.size(), ErrorKind::io, "truncated field data");
    T v;
    std::memcpy(&v, bytes.data() + pos, sizeof(T));
    pos += sizeof(T);
    return v;
}

std::string fmt_double(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double parse_double(std::string const& s)
{
    char* end = nullptr;
    double v = std::strtod(s.c_str(), &end);
    require(end != s.c_str() && *end == '\0', ErrorKind::io, "bad number '" + s + "'");
    return v;
}

std::vector<std::string> split(std::string const& line, char sep)
{
    std::vector<std::string> parts;
    std::stringstream ss(line);
    std::string item;
    while (std::getline(ss, item, sep))
        parts.push_back(item);
    return parts;
}

std::string read_all(std::string const& path)
{
    std::ifstream in(path, std::ios::binary);
    require(static_cast<bool>(in), ErrorKind::io, "cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_all(std::string const& path, char const* data, std::size_t size)
{
    std::ofstream out(path, std::ios::binary);
    require(static_cast<bool>(out), ErrorKind::io, "cannot write " + path);
    out.write(data, static_cast<std::streamsize>(size));
    require(static_cast<bool>(out), ErrorKind::io, "write failed for " + path);
}
}  // namespace

std::vector<std::uint8_t> encode_field(SampledField const& f)
{
    std::vector<std::uint8_t> out(kMagic, kMagic + 8);
    put<std::int32_t>(out, f.spec.n);
    for (int a = 0; a < kMaxAxes; ++a)
        put<std::int32_t>(out, f.spec.shape[a]);
    for (int a = 0; a < kMaxAxes; ++a)
        put<double>(out, f.spec.origin[a]);
    put<double>(out, f.spec.h_x);
    put<double>(out, f.spec.h_t);
    put<std::uint64_t>(out, f.values.size());
    for (double v : f.values)
        put<double>(out, v);
    return out;
}

SampledField decode_field(std::span<std::uint8_t const> bytes)
{
    require(bytes.size() >= 8 && std::memcmp(bytes.data(), kMagic, 8) == 0,
            ErrorKind::io, "not a field file");
    std::size_t pos = 8;
    GridSpec g;
    g.n = take<std::int32_t>(bytes, pos);
    for (int a = 0; a < kMaxAxes; ++a)
        g.shape[a] = take<std::int32_t>(bytes, pos);
    for (int a = 0; a < kMaxAxes; ++a)
        g.origin[a] = take<double>(bytes, pos);
    g.h_x = take<double>(bytes, pos);
    g.h_t = take<double>(bytes, pos);
    g.validate();
    auto count = take<std::uint64_t>(bytes, pos);
    require(count == g.cell_count(), ErrorKind::io, "field value count mismatch");
    std::vector<double> values(count);
    for (auto& v : values)
        v = take<double>(bytes, pos);
    require(pos == bytes.size(), ErrorKind::io, "trailing bytes in field data");
    return SampledField(g, std::move(values));
}

void save_field(SampledField const& f, std::string const& path)
{
    auto bytes = encode_field(f);
    write_all(path, reinterpret_cast<char const*>(bytes.data()), bytes.size());
}

SampledField load_field(std::string const& path)
{
    std::string s = read_all(path);
    return decode_field(std::span<std::uint8_t const>(
        reinterpret_cast<std::uint8_t const*>(s.data()), s.size()));
}

// CSV: a header row, one metadata row, then one row per time line.
std::string to_csv(SampledField const& f)
{
    auto const& g = f.spec;
    std::string s = "n,shape,origin,h_x,h_t\n";
    s += std::to_string(g.n) + ",";
    for (int a = 0; a < g.axes(); ++a)
        s += (a ? " " : "") + std::to_string(g.shape[a]);
    s += ",";
    for (int a = 0; a < g.axes(); ++a)
        s += (a ? " " : "") + fmt_double(g.origin[a]);
    s += "," + fmt_double(g.h_x) + "," + fmt_double(g.h_t) + "\n";
    auto nt = static_cast<std::size_t>(g.shape[g.n]);
    for (std::size_t i = 0; i < f.values.size(); ++i)
    {
        s += fmt_double(f.values[i]);
        s += ((i + 1) % nt == 0) ? "\n" : ",";
    }
    return s;
}

SampledField from_csv(std::string const& text)
{
    std::stringstream ss(text);
    std::string line;
    require(static_cast<bool>(std::getline(ss, line)) && line == "n,shape,origin,h_x,h_t",
            ErrorKind::io, "missing field CSV header");
    require(static_cast<bool>(std::getline(ss, line)), ErrorKind::io, "missing field CSV metadata");
    auto meta = split(line, ',');
    require(meta.size() == 5, ErrorKind::io, "bad field CSV metadata");
    GridSpec g;
    g.n = std::stoi(meta[0]);
    auto shape = split(meta[1], ' ');
    auto origin = split(meta[2], ' ');
    require(static_cast<int>(shape.size()) == g.n + 1 && origin.size() == shape.size(),
            ErrorKind::io, "field CSV axis count mismatch");
    for (int a = 0; a <= g.n; ++a)
    {
        g.shape[a] = std::stoi(shape[a]);
        g.origin[a] = parse_double(origin[a]);
    }
    g.h_x = parse_double(meta[3]);
    g.h_t = parse_double(meta[4]);
    g.validate();
    std::vector<double> values;
    values.reserve(g.cell_count());
    while (std::getline(ss, line))
    {
        if (line.empty())
            continue;
        auto row = split(line, ',');
        require(static_cast<int>(row.size()) == g.shape[g.n], ErrorKind::io,
                "field CSV row length mismatch");
        for (auto const& cell : row)
            values.push_back(parse_double(cell));
    }
    return SampledField(g, std::move(values));
}

void save_field_csv(SampledField const& f, std::string const& path)
{
    std::string s = to_csv(f);
    write_all(path, s.data(), s.size());
}

SampledField load_field_csv(std::string const& path)
{
    return from_csv(read_all(path));
}

}  // namespace parawt
