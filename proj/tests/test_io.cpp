#include <doctest.h>

#include <filesystem>
#include <sstream>

#include "coarse/graphs.hpp"
#include "coarse/io.hpp"

using namespace coarse;

TEST_CASE("format_double round trips") {
  for (double x : {0.0, 1.0, -2.5, 0.1, 1.0 / 3.0, 1e-300, 6.02e23})
    CHECK(std::stod(format_double(x)) == x);
  CHECK(format_double(0.5) == "0.5");
}

TEST_CASE("edge list round trip") {
  const auto g = margulis_graph(3);
  std::ostringstream os;
  write_edge_list(os, g);
  std::istringstream in(os.str());
  const auto back = read_edge_list(in);
  CHECK(back.vertex_count() == 9);
  CHECK(back.edges() == g.edges());
}

TEST_CASE("edge list errors") {
  std::istringstream missing("3 2\n0 1\n");
  CHECK_THROWS_AS(read_edge_list(missing), std::runtime_error);
  std::istringstream loop("2 1\n0 0\n");
  CHECK_THROWS(read_edge_list(loop));
  std::istringstream junk("x y\n");
  CHECK_THROWS_AS(read_edge_list(junk), std::runtime_error);
  CHECK_THROWS_AS(read_edge_list(std::filesystem::path("/nonexistent/graph.txt")),
                  std::runtime_error);
}

TEST_CASE("atomic write") {
  const auto dir = std::filesystem::temp_directory_path() / "coarse_io_test";
  std::filesystem::create_directories(dir);
  const auto path = dir / "out.txt";
  write_file_atomic(path, "first\n");
  write_file_atomic(path, "second\n");
  CHECK(read_file(path) == "second\n");
  CHECK_FALSE(std::filesystem::exists(path.string() + ".tmp"));
  std::filesystem::remove_all(dir);
}

TEST_CASE("size lists") {
  CHECK(parse_size_list("3..6") == std::vector<int>{3, 4, 5, 6});
  CHECK(parse_size_list("16,32,64") == std::vector<int>{16, 32, 64});
  CHECK(parse_size_list("3..4,9") == std::vector<int>{3, 4, 9});
  CHECK(parse_size_list("7") == std::vector<int>{7});
  CHECK_THROWS(parse_size_list("5..3"));
  CHECK_THROWS(parse_size_list("a,b"));
  CHECK_THROWS(parse_size_list(""));
  CHECK_THROWS(parse_size_list("3,,4"));
}
