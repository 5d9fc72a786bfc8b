#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace dynsa {

// Text positions, ranks and lengths. Signed so that boundary arithmetic
// such as x - k + 1 can go below 1 without wrapping.
using Index = std::int64_t;

using Symbol = unsigned char;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class OutOfRange : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class Unsupported : public Error {
 public:
  using Error::Error;
};

// Work counters used as the complexity proxy. One instance per thread so
// that fuzz shards do not interfere.
struct OpCounters {
  std::uint64_t lce_calls = 0;
  std::uint64_t range_visits = 0;
  std::uint64_t range_updates = 0;
  std::uint64_t stairs_updates = 0;
  std::uint64_t interval_updates = 0;
  std::uint64_t hash_collisions = 0;
  // Steps through order-statistic trees (k-words trees, position ledgers).
  std::uint64_t tree_steps = 0;

  void reset() { *this = OpCounters{}; }
};

OpCounters& op_counters();

// Thresholds that trigger amortized rebuilds. Overridable through the
// DYNSA_EPOCH_POLICY environment variable, e.g.
//   DYNSA_EPOCH_POLICY="stairs_flush=2,k_low=0.5,k_high=2"
struct EpochPolicy {
  // A stairs store flushes into its interval store once it holds more than
  // stairs_flush * capacity updates.
  double stairs_flush = 4.0;
  // The iSA engine rebuilds when k leaves [k_low * sqrt(n), k_high * sqrt(n)];
  // the SA engine uses the same factors around n^(2/3).
  double k_low = 0.5;
  double k_high = 2.0;

  static EpochPolicy parse(const std::string& spec);
  static const EpochPolicy& current();
};

}  // namespace dynsa
