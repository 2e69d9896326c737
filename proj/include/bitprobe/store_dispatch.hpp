#pragma once
// Kind-based dispatch to the canonical storer of a scheme.

#include "bitprobe/multi_probe.hpp"
#include "bitprobe/scheme.hpp"
#include "bitprobe/three_probe.hpp"
#include "bitprobe/two_probe.hpp"

namespace bitprobe {

inline BitMemory store_set(const Scheme& scheme, const std::vector<std::uint64_t>& set) {
  switch (scheme.kind()) {
    case SchemeKind::CharVector: {
      BitMemory memory(scheme.params().total_bits);
      for (auto u : set) memory.set(u, true);
      return memory;
    }
    case SchemeKind::TwoProbe: return twoprobe::store(scheme, set);
    case SchemeKind::ThreeProbe: return threeprobe::store(scheme, set);
    case SchemeKind::NonAdaptive: return multiprobe::store_nonadaptive(scheme, set);
    case SchemeKind::Adaptive: return multiprobe::store_adaptive(scheme, set);
  }
  throw std::logic_error("unreachable kind");
}

inline Storer storer_for(const Scheme& scheme) {
  return [&scheme](const std::vector<std::uint64_t>& set) { return store_set(scheme, set); };
}

}  // namespace bitprobe
