#include "gtd/bounds.hpp"

#include <cmath>
#include <queue>
#include <string>
#include <utility>
#include <vector>

namespace gtd {

namespace {

double binary_entropy(double p) {
  const double q = 1.0 - p;
  return -(p * std::log2(p) + q * std::log2(q));
}

}  // namespace

double shannon_entropy(const PrevalenceSpec& spec) {
  if (spec.is_homogeneous()) return static_cast<double>(spec.size()) * binary_entropy(spec.p());
  CompensatedSum total;
  for (std::size_t i = 0; i < spec.size(); ++i) total.add(binary_entropy(spec.prob(i)));
  return total.value();
}

double huffman_bound(const PrevalenceSpec& spec, std::size_t cap) {
  const std::size_t n = spec.size();
  if (cap > kHuffmanHardCap) cap = kHuffmanHardCap;
  if (n > cap)
    throw InvalidArgument("Huffman bound refused: N = " + std::to_string(n) + " exceeds cap " +
                          std::to_string(cap));

  const std::size_t leaves = std::size_t{1} << n;
  // Configuration c marks item i defective when bit i is set.
  std::vector<double> weight(leaves, 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double p = spec.prob(i);
    const double q = 1.0 - p;
    for (std::size_t c = 0; c < leaves; ++c) weight[c] *= (c >> i) & 1U ? p : q;
  }

  // Min-heap on (weight, creation order); leaves are created in configuration
  // order, merged nodes after them, so equal weights merge deterministically.
  using Node = std::pair<double, std::size_t>;
  std::priority_queue<Node, std::vector<Node>, std::greater<>> heap;
  for (std::size_t c = 0; c < leaves; ++c) heap.emplace(weight[c], c);

  // Expected length = sum of the weights of all internal nodes.
  CompensatedSum length;
  std::size_t next_id = leaves;
  while (heap.size() > 1) {
    const auto [w1, id1] = heap.top();
    heap.pop();
    const auto [w2, id2] = heap.top();
    heap.pop();
    length.add(w1 + w2);
    heap.emplace(w1 + w2, next_id++);
  }
  return length.value();
}

std::uint64_t bell_number(int n) {
  if (n < 1 || n > 25) throw OutOfRange("Bell number supported for 1 <= n <= 25");
  // Bell triangle: each row starts with the previous row's last entry; B(n)
  // is the last entry of row n-1 (rows counted from 0 with row 0 = {1}).
  std::vector<std::uint64_t> row{1};
  for (int r = 1; r < n; ++r) {
    std::vector<std::uint64_t> next{row.back()};
    for (std::uint64_t v : row) next.push_back(next.back() + v);
    row = std::move(next);
  }
  return row.back();
}

BoundReport bound_report(const PrevalenceSpec& spec, bool with_huffman, std::size_t cap) {
  BoundReport report;
  report.entropy_bits = shannon_entropy(spec);
  report.cap = cap;
  if (with_huffman) report.huffman_length = huffman_bound(spec, cap);
  return report;
}

}  // namespace gtd
