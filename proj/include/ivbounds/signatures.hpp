#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ivbounds/errors.hpp"
#include "ivbounds/model.hpp"

namespace ivb {

enum class SignatureFamily { S1, S2, S3 };

inline const char* family_name(SignatureFamily f) {
  switch (f) {
    case SignatureFamily::S1: return "S1";
    case SignatureFamily::S2: return "S2";
    default: return "S3";
  }
}

// A binary pattern B in {0,1}^{n x 2 x 2} classifying one dual vertex.
// Family S1: the d=0 column pair is all-ones from row t upward and strictly
// mixed below; the d=1 pair is strictly mixed everywhere and non-constant.
// Family S2: row n-1 is all-ones in the d=0 pair, row 0 in the d=1 pair,
// everything else strictly mixed.  Family S3 mirrors S1 with an all-ones
// prefix of the d=1 pair through row t+1.
struct Signature {
  std::size_t n = 0;
  SignatureFamily family = SignatureFamily::S1;
  // Family parameter: the S1 threshold, or the S3 prefix parameter (the
  // all-ones prefix covers rows 0..t+1).  Unused (-1) for S2.
  int t = -1;
  std::uint64_t mask[2][2] = {{0, 0}, {0, 0}};  // bit i of mask[d][z] = B_{idz}

  bool bit(std::size_t i, std::size_t d, std::size_t z) const {
    return (mask[d][z] >> i) & 1u;
  }

  // Bits in display order (z outermost, then d, then y), matching printed
  // listings: (B_000, B_100, ..., B_011, B_111) for n = 2.
  std::vector<int> bits_display_order() const {
    std::vector<int> out;
    out.reserve(4 * n);
    for (std::size_t z = 0; z < 2; ++z)
      for (std::size_t d = 0; d < 2; ++d)
        for (std::size_t y = 0; y < n; ++y) out.push_back(bit(y, d, z) ? 1 : 0);
    return out;
  }

  std::string display_string() const {
    std::string s;
    for (int b : bits_display_order()) s += b ? '1' : '0';
    return s;
  }

  friend bool operator==(const Signature& a, const Signature& b) {
    return a.n == b.n && a.mask[0][0] == b.mask[0][0] && a.mask[0][1] == b.mask[0][1] &&
           a.mask[1][0] == b.mask[1][0] && a.mask[1][1] == b.mask[1][1];
  }
  friend bool operator<(const Signature& a, const Signature& b) {
    auto key = [](const Signature& s) {
      return std::array<std::uint64_t, 4>{s.mask[0][0], s.mask[0][1], s.mask[1][0], s.mask[1][1]};
    };
    return key(a) < key(b);
  }
};

// Closed-form count of admissible signatures: 5*4^(n-1) - 2^(n+2) + 4.
inline std::uint64_t count_signatures(std::size_t n) {
  if (n < 2 || n > 30) throw ShapeMismatch("count_signatures requires 2 <= n <= 30");
  const std::uint64_t p4 = std::uint64_t{1} << (2 * (n - 1));
  return 5 * p4 - (std::uint64_t{1} << (n + 2)) + 4;
}

inline std::uint64_t count_signatures_s1(std::size_t n) {
  return ((std::uint64_t{1} << (n - 1)) - 1) * ((std::uint64_t{1} << n) - 2);
}
inline std::uint64_t count_signatures_s2(std::size_t n) {
  return std::uint64_t{1} << (2 * (n - 1));
}

namespace detail {

inline std::uint64_t low_mask(std::size_t bits) {
  return bits >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << bits) - 1;
}

inline Signature make_s1(std::size_t n, std::size_t t, std::uint64_t low, std::uint64_t x) {
  Signature s;
  s.n = n;
  s.family = SignatureFamily::S1;
  s.t = static_cast<int>(t);
  const std::uint64_t full = low_mask(n), below = low_mask(t), suffix = full & ~below;
  s.mask[0][0] = suffix | low;
  s.mask[0][1] = suffix | (below & ~low);
  s.mask[1][0] = x;
  s.mask[1][1] = full & ~x;
  return s;
}

inline Signature make_s2(std::size_t n, std::uint64_t a, std::uint64_t b) {
  Signature s;
  s.n = n;
  s.family = SignatureFamily::S2;
  const std::uint64_t lowN1 = low_mask(n - 1), top = std::uint64_t{1} << (n - 1);
  s.mask[0][0] = top | a;
  s.mask[0][1] = top | (lowN1 & ~a);
  s.mask[1][0] = 1 | (b << 1);
  s.mask[1][1] = 1 | ((lowN1 & ~b) << 1);
  return s;
}

inline Signature make_s3(std::size_t n, std::size_t t, std::uint64_t hi, std::uint64_t c) {
  Signature s;
  s.n = n;
  s.family = SignatureFamily::S3;
  s.t = static_cast<int>(t);
  const std::uint64_t full = low_mask(n), prefix = low_mask(t + 2);
  const std::uint64_t hi_rows = full & ~prefix, hi_bits = hi << (t + 2);
  s.mask[1][0] = prefix | hi_bits;
  s.mask[1][1] = prefix | (hi_rows & ~hi_bits);
  s.mask[0][0] = c;
  s.mask[0][1] = full & ~c;
  return s;
}

}  // namespace detail

// One contiguous block of the enumeration: a fixed family plus its outer
// counter.  Splitting the stream into segments gives natural parallel units.
struct SignatureSegment {
  SignatureFamily family;
  std::size_t outer;  // t for S1/S3, the d=0 mixed-row counter for S2
};

inline std::vector<SignatureSegment> signature_segments(std::size_t n) {
  std::vector<SignatureSegment> segs;
  for (std::size_t t = 0; t + 1 < n; ++t) segs.push_back({SignatureFamily::S1, t});
  for (std::uint64_t a = 0; a < (std::uint64_t{1} << (n - 1)); ++a)
    segs.push_back({SignatureFamily::S2, static_cast<std::size_t>(a)});
  for (std::size_t t = 0; t + 1 < n; ++t) segs.push_back({SignatureFamily::S3, t});
  return segs;
}

// Enumerates every admissible signature of one segment, in deterministic
// order, with constant memory per item.
template <typename Fn>
void for_each_signature_in(std::size_t n, const SignatureSegment& seg, Fn&& fn) {
  const std::uint64_t nonconst_lo = 1, nonconst_hi = (std::uint64_t{1} << n) - 2;
  switch (seg.family) {
    case SignatureFamily::S1: {
      const std::size_t t = seg.outer;
      for (std::uint64_t low = 0; low < (std::uint64_t{1} << t); ++low)
        for (std::uint64_t x = nonconst_lo; x <= nonconst_hi; ++x)
          fn(detail::make_s1(n, t, low, x));
      break;
    }
    case SignatureFamily::S2: {
      for (std::uint64_t b = 0; b < (std::uint64_t{1} << (n - 1)); ++b)
        fn(detail::make_s2(n, seg.outer, b));
      break;
    }
    case SignatureFamily::S3: {
      const std::size_t t = seg.outer;
      for (std::uint64_t hi = 0; hi < (std::uint64_t{1} << (n - t - 2)); ++hi)
        for (std::uint64_t c = nonconst_lo; c <= nonconst_hi; ++c)
          fn(detail::make_s3(n, t, hi, c));
      break;
    }
  }
}

template <typename Fn>
void for_each_signature(std::size_t n, Fn&& fn) {
  if (n < 2) throw ShapeMismatch("signatures require n >= 2");
  for (const auto& seg : signature_segments(n)) for_each_signature_in(n, seg, fn);
}

// Pull-style restartable stream over the same order as for_each_signature.
class SignatureStream {
 public:
  explicit SignatureStream(std::size_t n) : n_(n), segs_(signature_segments(n)) { reset(); }

  void reset() {
    seg_ = 0;
    inner1_ = inner2_ = 0;
    load_segment();
  }

  std::optional<Signature> next() {
    while (seg_ < segs_.size()) {
      if (inner1_ < inner1_count_ && inner2_ < inner2_count_) {
        Signature s = make_current();
        advance();
        return s;
      }
      ++seg_;
      inner1_ = inner2_ = 0;
      load_segment();
    }
    return std::nullopt;
  }

 private:
  void load_segment() {
    if (seg_ >= segs_.size()) return;
    const auto& seg = segs_[seg_];
    const std::uint64_t nonconst = (std::uint64_t{1} << n_) - 2;
    switch (seg.family) {
      case SignatureFamily::S1:
        inner1_count_ = std::uint64_t{1} << seg.outer;
        inner2_count_ = nonconst;
        break;
      case SignatureFamily::S2:
        inner1_count_ = std::uint64_t{1} << (n_ - 1);
        inner2_count_ = 1;
        break;
      case SignatureFamily::S3:
        inner1_count_ = std::uint64_t{1} << (n_ - seg.outer - 2);
        inner2_count_ = nonconst;
        break;
    }
  }

  Signature make_current() const {
    const auto& seg = segs_[seg_];
    switch (seg.family) {
      case SignatureFamily::S1:
        return detail::make_s1(n_, seg.outer, inner1_, inner2_ + 1);
      case SignatureFamily::S2:
        return detail::make_s2(n_, seg.outer, inner1_);
      default:
        return detail::make_s3(n_, seg.outer, inner1_, inner2_ + 1);
    }
  }

  void advance() {
    if (++inner2_ >= inner2_count_) {
      inner2_ = 0;
      ++inner1_;
    }
  }

  std::size_t n_;
  std::vector<SignatureSegment> segs_;
  std::size_t seg_ = 0;
  std::uint64_t inner1_ = 0, inner2_ = 0;
  std::uint64_t inner1_count_ = 0, inner2_count_ = 0;
};

// Classifies a raw bit pattern, returning the family tag and parameter, or
// throwing NotAdmissible naming the first violated clause.  Bits are given in
// the canonical flat layout i*4 + d*2 + z.
inline Signature classify(const std::vector<int>& bits, std::size_t n) {
  if (bits.size() != 4 * n) throw ShapeMismatch("signature bits must have shape n x 2 x 2");
  Signature s;
  s.n = n;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t d = 0; d < 2; ++d)
      for (std::size_t z = 0; z < 2; ++z)
        if (bits[i * 4 + d * 2 + z]) s.mask[d][z] |= std::uint64_t{1} << i;

  const std::uint64_t full = detail::low_mask(n);
  const std::uint64_t both0 = s.mask[0][0] & s.mask[0][1];  // all-ones rows, d=0 pair
  const std::uint64_t both1 = s.mask[1][0] & s.mask[1][1];
  const std::uint64_t none0 = full & ~(s.mask[0][0] | s.mask[0][1]);
  const std::uint64_t none1 = full & ~(s.mask[1][0] | s.mask[1][1]);
  if (none0) throw NotAdmissible("a row has B_i00 = B_i01 = 0");
  if (none1) throw NotAdmissible("a row has B_i10 = B_i11 = 0");

  auto is_suffix = [&](std::uint64_t m, std::size_t& t) {
    if (m == 0) return false;
    std::size_t low = 0;
    while (!((m >> low) & 1u)) ++low;
    t = low;
    return (m >> low) == detail::low_mask(n - low);
  };
  auto is_prefix = [&](std::uint64_t m, std::size_t& len) {
    if (m == 0) return false;
    std::size_t l = 0;
    while (l < n && ((m >> l) & 1u)) ++l;
    len = l;
    return m == detail::low_mask(l);
  };

  if (both0 != 0 && both1 != 0) {
    // Only S2 admits simultaneous all-ones rows, pinned at (n-1, d=0) and (0, d=1).
    if (both0 != (std::uint64_t{1} << (n - 1)))
      throw NotAdmissible("rows with B_i00 = B_i01 = 1 must be exactly {n-1}");
    if (both1 != 1)
      throw NotAdmissible("rows with B_i10 = B_i11 = 1 must be exactly {0}");
    s.family = SignatureFamily::S2;
    s.t = -1;
    return s;
  }
  if (both0 != 0) {
    std::size_t t;
    if (!is_suffix(both0, t))
      throw NotAdmissible("rows with B_i00 = B_i01 = 1 must form a suffix");
    if (t + 1 >= n) throw NotAdmissible("the S1 suffix must start at t <= n-2");
    if (s.mask[1][0] == 0 || s.mask[1][1] == 0)
      throw NotAdmissible("need some i, j with B_i10 = B_j11 = 1");
    s.family = SignatureFamily::S1;
    s.t = static_cast<int>(t);
    return s;
  }
  if (both1 != 0) {
    std::size_t len;
    if (!is_prefix(both1, len))
      throw NotAdmissible("rows with B_i10 = B_i11 = 1 must form a prefix");
    if (len < 2) throw NotAdmissible("the S3 prefix must cover rows 0..t+1 with t >= 0");
    if (s.mask[0][0] == 0 || s.mask[0][1] == 0)
      throw NotAdmissible("need some i, j with B_i00 = B_j01 = 1");
    s.family = SignatureFamily::S3;
    s.t = static_cast<int>(len - 2);
    return s;
  }
  throw NotAdmissible("no all-ones row in either column pair");
}

}  // namespace ivb
