#pragma once

#include <string>
#include <vector>

#include "sparsepr/types.hpp"

namespace sparsepr {

/// Outcome of a uniqueness classification. Ambiguous and NotCovered are
/// results, not errors.
template <Scalar T>
struct UniquenessVerdict {
  enum class Kind { Unique, Ambiguous, NotCovered };

  Kind kind;
  std::string reason;                   // set for NotCovered
  std::vector<SpikeSignal<T>> signals;  // the recovered signal, or the witnesses

  static UniquenessVerdict unique(SpikeSignal<T> s) { return {Kind::Unique, {}, {std::move(s)}}; }
  static UniquenessVerdict ambiguous(std::vector<SpikeSignal<T>> witnesses) {
    return {Kind::Ambiguous, {}, std::move(witnesses)};
  }
  static UniquenessVerdict not_covered(std::string why) { return {Kind::NotCovered, std::move(why), {}}; }
};

template <Scalar T>
constexpr const char* verdict_name(typename UniquenessVerdict<T>::Kind k) {
  switch (k) {
    case UniquenessVerdict<T>::Kind::Unique: return "unique";
    case UniquenessVerdict<T>::Kind::Ambiguous: return "ambiguous";
    case UniquenessVerdict<T>::Kind::NotCovered: return "not_covered";
  }
  return "unknown";
}

}  // namespace sparsepr
