#include "doctest.h"

#include <sstream>

#include "mcl/dataset_io.hpp"

using namespace mcl;

namespace {

Dataset sample_dataset(DomainKind kind, std::uint32_t d, std::uint64_t n, std::uint64_t seed) {
  Dataset ds;
  ds.spec = make_domain(kind, d);
  ds.seed = seed;
  ds.points = sample_points(ds.spec, seed, n);
  return ds;
}

}  // namespace

TEST_CASE("text round trip is exact for every kind") {
  for (const DomainKind kind :
       {DomainKind::hamming, DomainKind::unit_cube, DomainKind::gaussian, DomainKind::sphere}) {
    const Dataset ds = sample_dataset(kind, 13, 37, 5);
    std::stringstream buf;
    write_dataset_text(buf, ds);
    const Dataset back = read_dataset_text(buf);
    CHECK(back.spec == ds.spec);
    CHECK(back.seed == ds.seed);
    CHECK(back.points == ds.points);
  }
}

TEST_CASE("binary round trip is bit exact") {
  for (const DomainKind kind : {DomainKind::hamming, DomainKind::gaussian}) {
    const Dataset ds = sample_dataset(kind, 70, 21, 9);
    std::stringstream buf;
    write_dataset_binary(buf, ds);
    const Dataset back = read_dataset_binary(buf);
    CHECK(back.points == ds.points);
    // writing again produces identical bytes
    std::stringstream buf2;
    write_dataset_binary(buf2, back);
    std::stringstream buf3;
    write_dataset_binary(buf3, ds);
    CHECK(buf2.str() == buf3.str());
  }
}

TEST_CASE("text header is the documented kind,d,n,seed line") {
  const Dataset ds = sample_dataset(DomainKind::hamming, 8, 2, 3);
  std::stringstream buf;
  write_dataset_text(buf, ds);
  std::string line;
  std::getline(buf, line);
  CHECK(line == "hamming,8,2,3");
  std::getline(buf, line);
  CHECK(line.size() == 2);  // 8 bits -> 2 hex digits
}

TEST_CASE("truncated and malformed inputs raise io errors") {
  std::stringstream empty;
  CHECK_THROWS_AS(read_dataset_text(empty), Error);

  std::stringstream bad_header("hamming,8\n");
  CHECK_THROWS_AS(read_dataset_text(bad_header), Error);

  std::stringstream truncated("hamming,8,3,0\nff\n");
  CHECK_THROWS_AS(read_dataset_text(truncated), Error);

  std::stringstream not_binary("MCLX????");
  CHECK_THROWS_AS(read_dataset_binary(not_binary), Error);
}

TEST_CASE("fingerprint changes with content") {
  const Dataset a = sample_dataset(DomainKind::hamming, 16, 10, 1);
  Dataset b = a;
  CHECK(dataset_fingerprint(a) == dataset_fingerprint(b));
  b.points[3].bits[0] ^= 1;
  CHECK(dataset_fingerprint(a) != dataset_fingerprint(b));
}
