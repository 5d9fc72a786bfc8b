#include "dynsa/common.hpp"

#include <cstdlib>
#include <sstream>

namespace dynsa {

OpCounters& op_counters() {
  thread_local OpCounters counters;
  return counters;
}

EpochPolicy EpochPolicy::parse(const std::string& spec) {
  EpochPolicy policy;
  std::stringstream in(spec);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    auto eq = item.find('=');
    if (eq == std::string::npos) {
      throw InvalidArgument("epoch policy entry without '=': " + item);
    }
    std::string key = item.substr(0, eq);
    double value = 0;
    try {
      value = std::stod(item.substr(eq + 1));
    } catch (const std::exception&) {
      throw InvalidArgument("epoch policy value is not a number: " + item);
    }
    if (!(value > 0)) throw InvalidArgument("epoch policy value must be positive: " + item);
    if (key == "stairs_flush") {
      policy.stairs_flush = value;
    } else if (key == "k_low") {
      policy.k_low = value;
    } else if (key == "k_high") {
      policy.k_high = value;
    } else {
      throw InvalidArgument("unknown epoch policy key: " + key);
    }
  }
  return policy;
}

const EpochPolicy& EpochPolicy::current() {
  static const EpochPolicy policy = [] {
    const char* env = std::getenv("DYNSA_EPOCH_POLICY");
    return env ? parse(env) : EpochPolicy{};
  }();
  return policy;
}

}  // namespace dynsa
