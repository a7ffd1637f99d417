#pragma once

// METEOR with exact and stem alignment stages (no synonym stage).
// Tokens are whitespace-separated and lower-cased.

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ftc/stem.hpp"
#include "ftc/text.hpp"

namespace ftc {

struct MeteorParams {
  double alpha = 0.9;
  double beta = 3.0;
  double gamma = 0.5;
};

namespace detail {

using Alignment = std::vector<std::pair<std::size_t, std::size_t>>;  // (candidate, reference)

// Greedy stage: scan the candidate from its last word backwards and take the
// last still-unmatched reference word that agrees.
template <typename Key>
void align_stage(const std::vector<std::string>& cand, const std::vector<std::string>& ref,
                 std::vector<bool>& cand_used, std::vector<bool>& ref_used, Alignment& out, Key key) {
  for (std::size_t ii = cand.size(); ii-- > 0;) {
    if (cand_used[ii]) continue;
    const std::string kc = key(cand[ii]);
    for (std::size_t jj = ref.size(); jj-- > 0;) {
      if (ref_used[jj] || key(ref[jj]) != kc) continue;
      out.emplace_back(ii, jj);
      cand_used[ii] = true;
      ref_used[jj] = true;
      break;
    }
  }
}

inline std::size_t count_chunks(Alignment a) {
  std::sort(a.begin(), a.end());
  std::size_t chunks = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (i == 0 || a[i].first != a[i - 1].first + 1 || a[i].second != a[i - 1].second + 1) ++chunks;
  }
  return chunks;
}

}  // namespace detail

inline double meteor_single(std::string_view candidate, std::string_view reference,
                            const MeteorParams& p = {}) {
  const auto cand = text::split_whitespace(text::to_lower(candidate));
  const auto ref = text::split_whitespace(text::to_lower(reference));
  if (cand.empty() || ref.empty()) return 0.0;

  std::vector<bool> cu(cand.size()), ru(ref.size());
  detail::Alignment al;
  detail::align_stage(cand, ref, cu, ru, al, [](const std::string& w) { return w; });
  detail::align_stage(cand, ref, cu, ru, al, [](const std::string& w) { return stem(w); });
  if (al.empty()) return 0.0;

  const double m = static_cast<double>(al.size());
  const double precision = m / static_cast<double>(cand.size());
  const double recall = m / static_cast<double>(ref.size());
  const double fmean = precision * recall / (p.alpha * precision + (1.0 - p.alpha) * recall);
  const double frag = static_cast<double>(detail::count_chunks(al)) / m;
  const double penalty = p.gamma * std::pow(frag, p.beta);
  return fmean * (1.0 - penalty);
}

// Best score over the references; 0 for an empty candidate or no references.
inline double meteor(std::string_view candidate, std::span<const std::string> references,
                     const MeteorParams& p = {}) {
  double best = 0.0;
  for (const auto& r : references) best = std::max(best, meteor_single(candidate, r, p));
  return best;
}

}  // namespace ftc
