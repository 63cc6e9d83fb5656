#include "rigidloc/random.hpp"

namespace rigidloc {

namespace {
constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
}

std::uint64_t mix64(std::uint64_t x) {
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

RandomStream RandomStream::substream(std::uint64_t master_seed, std::uint64_t trial,
                                     StreamPurpose purpose) {
  std::uint64_t key = mix64(master_seed + kGolden);
  key = mix64(key ^ (trial + 0x632be59bd9b4e019ULL));
  key = mix64(key ^ (static_cast<std::uint64_t>(purpose) * kGolden));
  return RandomStream(key);
}

RandomStream::result_type RandomStream::operator()() {
  ++counter_;
  return mix64(key_ + counter_ * kGolden);
}

}  // namespace rigidloc
