#include "coarse/io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <system_error>

namespace coarse {

std::string format_double(double x) {
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  if (ec != std::errc())
    throw std::runtime_error("format_double failed");
  return std::string(buf, end);
}

FiniteGraph read_edge_list(std::istream &in) {
  long n = 0, m = 0;
  if (!(in >> n >> m) || n <= 0 || m < 0)
    throw std::runtime_error("edge list: bad header, expected \"n m\"");
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(m));
  for (long i = 0; i < m; ++i) {
    long u = 0, v = 0;
    if (!(in >> u >> v))
      throw std::runtime_error("edge list: expected " + std::to_string(m) + " edges, got " +
                               std::to_string(i));
    edges.push_back({static_cast<Vertex>(u), static_cast<Vertex>(v)});
  }
  std::string extra;
  if (in >> extra)
    throw std::runtime_error("edge list: trailing data after " + std::to_string(m) + " edges");
  try {
    return FiniteGraph(static_cast<int>(n), std::move(edges));
  } catch (const std::invalid_argument &e) {
    throw std::runtime_error(std::string("edge list: ") + e.what());
  }
}

FiniteGraph read_edge_list(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in)
    throw std::runtime_error("cannot open " + path.string());
  return read_edge_list(in);
}

void write_edge_list(std::ostream &out, const FiniteGraph &g) {
  out << g.vertex_count() << ' ' << g.edge_count() << '\n';
  for (const Edge &e : g.edges())
    out << e.u << ' ' << e.v << '\n';
}

void write_file_atomic(const std::filesystem::path &path, std::string_view content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out)
      throw std::runtime_error("cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out)
      throw std::runtime_error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::string read_file(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

namespace {

int parse_int(std::string_view text, std::string_view whole) {
  int value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty())
    throw std::invalid_argument("bad size list: " + std::string(whole));
  return value;
}

} // namespace

std::vector<int> parse_size_list(std::string_view text) {
  std::vector<int> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = std::min(text.find(',', start), text.size());
    const std::string_view item = text.substr(start, comma - start);
    const std::size_t dots = item.find("..");
    if (dots == std::string_view::npos) {
      out.push_back(parse_int(item, text));
    } else {
      const int lo = parse_int(item.substr(0, dots), text);
      const int hi = parse_int(item.substr(dots + 2), text);
      if (hi < lo)
        throw std::invalid_argument("bad size range: " + std::string(item));
      for (int v = lo; v <= hi; ++v)
        out.push_back(v);
    }
    start = comma + 1;
  }
  return out;
}

} // namespace coarse
