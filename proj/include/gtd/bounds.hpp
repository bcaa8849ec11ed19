#pragma once

// Information-theoretic lower bounds on the expected number of tests.

#include <cstddef>
#include <cstdint>
#include <optional>

#include "gtd/model.hpp"

namespace gtd {

inline constexpr std::size_t kDefaultHuffmanCap = 16;
inline constexpr std::size_t kHuffmanHardCap = 24;

/// Sum over items of the binary entropy of p_i, in bits.
double shannon_entropy(const PrevalenceSpec& spec);

/// Expected codeword length of the optimal binary prefix code over all 2^N
/// defect configurations. Refuses N > cap.
double huffman_bound(const PrevalenceSpec& spec, std::size_t cap = kDefaultHuffmanCap);

/// Exact Bell number B(n) for 1 <= n <= 25.
std::uint64_t bell_number(int n);

struct BoundReport {
  double entropy_bits = 0.0;
  std::optional<double> huffman_length;
  std::size_t cap = kDefaultHuffmanCap;
};

BoundReport bound_report(const PrevalenceSpec& spec, bool with_huffman,
                         std::size_t cap = kDefaultHuffmanCap);

}  // namespace gtd
