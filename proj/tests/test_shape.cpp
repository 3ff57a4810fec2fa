#include "doctest.h"

#include "cpd/errors.hpp"
#include "cpd/shape.hpp"

using namespace cpd;

TEST_CASE("shape products") {
  Shape s({2, 3, 4});
  CHECK(s.order() == 3);
  CHECK(s.num_entries() == 24);
  CHECK(s.j_prefix(0) == 1);
  CHECK(s.j_prefix(1) == 2);
  CHECK(s.j_prefix(2) == 6);
  CHECK(s.j_prefix(3) == 24);
  CHECK(s.k_suffix(3) == 1);
  CHECK(s.k_suffix(0) == 24);
  for (int n = 0; n <= 3; ++n) CHECK(s.j_prefix(n) * s.k_suffix(n) == 24);
  CHECK(s.j_skip(1) == 12);
  CHECK(s.j_skip(2) == 8);
  CHECK(s.ascending());
  CHECK_FALSE(Shape({3, 2}).ascending());
  CHECK(Shape({1, 1}).ascending());
  CHECK(Shape({7}).order() == 1);
}

TEST_CASE("shape validation") {
  CHECK_THROWS_AS(Shape(std::vector<index_t>{}), ShapeError);
  CHECK_THROWS_AS(Shape({2, 0, 3}), ShapeError);
  CHECK_THROWS_AS(Shape({-1}), ShapeError);
  CHECK_THROWS_AS(Shape({index_t(1) << 32, index_t(1) << 32}), ShapeError);
  Shape s({2, 3});
  CHECK_THROWS_AS(s.dim(0), IndexError);
  CHECK_THROWS_AS(s.dim(3), IndexError);
  CHECK_THROWS_AS(s.j_prefix(-1), IndexError);
  CHECK_THROWS_AS(s.j_prefix(3), IndexError);
}

TEST_CASE("linear_index evaluates the first-index-fastest rule") {
  Shape s({2, 3, 4});
  CHECK(linear_index({1, 1, 1}, s) == 1);
  CHECK(linear_index({2, 3, 4}, s) == 24);
  CHECK(linear_index({2, 1, 2}, s) == 8);
  CHECK_THROWS_AS(linear_index({0, 1, 1}, s), IndexError);
  CHECK_THROWS_AS(linear_index({1, 4, 1}, s), IndexError);
  CHECK_THROWS_AS(linear_index({1, 1}, s), ArgumentError);

  // the error names the offending mode
  try {
    linear_index({1, 4, 1}, s);
    CHECK(false);
  } catch (const IndexError& e) {
    CHECK(std::string(e.what()).find("2") != std::string::npos);
  }
}

TEST_CASE("multi_index inverts linear_index exhaustively") {
  for (const auto& dims :
       {std::vector<index_t>{2, 3, 4}, {5}, {1, 4, 1, 3}, {2, 2, 2, 2, 2}}) {
    Shape s(dims);
    for (index_t lin = 1; lin <= s.num_entries(); ++lin) {
      const auto mi = multi_index(lin, s);
      CHECK(linear_index(mi, s) == lin);
    }
  }
  Shape s({2, 3});
  CHECK_THROWS_AS(multi_index(0, s), IndexError);
  CHECK_THROWS_AS(multi_index(7, s), IndexError);
}
