#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "mcl/domain.hpp"

namespace mcl {

struct Dataset {
  DomainSpec spec;
  std::uint64_t seed = 0;
  std::vector<Point> points;
};

/// Order-sensitive fingerprint of the dataset contents; stored in tree
/// files so a tree is never queried against the wrong data.
std::uint64_t dataset_fingerprint(const Dataset& ds);

// Text format: header `kind,d,n,seed`, then one point per line --
// hex bitstring for the Hamming cube (coordinate 4*j sits at the high bit
// of hex digit j), comma-separated %.17g decimals otherwise.
void write_dataset_text(std::ostream& out, const Dataset& ds);
Dataset read_dataset_text(std::istream& in);

// Binary format for large sweeps: magic "MCL1", little-endian header
// (kind u8, d u32, n u64, seed u64), then packed words / raw doubles.
void write_dataset_binary(std::ostream& out, const Dataset& ds);
Dataset read_dataset_binary(std::istream& in);

/// Loads either format, sniffing the MCL1 magic.
Dataset load_dataset(const std::string& path);
void save_dataset(const std::string& path, const Dataset& ds, bool binary);

}  // namespace mcl
