#include "hqsim/decomp.hpp"

#include <cmath>

namespace hqsim {

namespace {

constexpr double kPruneEps = 1e-12;

void append_offset(std::vector<CliffordOp>& dst, const std::vector<CliffordOp>& src,
                   std::uint32_t base) {
  for (CliffordOp op : src) {
    op.q0 += base;
    if (op.kind == CliffordOp::Kind::CX || op.kind == CliffordOp::Kind::CZ) op.q1 += base;
    dst.push_back(op);
  }
}

WeightedPrep uniform_block(std::uint32_t w) {
  WeightedPrep t;
  for (std::uint32_t j = 0; j < w; ++j) t.ops.push_back(CliffordOp::h(j));
  t.s2e = static_cast<int>(w);
  return t;
}

std::vector<WeightedPrep> negated(std::vector<WeightedPrep> v) {
  for (WeightedPrep& t : v) t.coeff = -t.coeff;
  return v;
}

struct Track {
  std::vector<WeightedPrep> pos, neg;
  std::uint32_t width = 0;
};

// Tensor product of one term list per child, children laid out at offsets.
std::vector<WeightedPrep> product(const std::vector<const std::vector<WeightedPrep>*>& lists,
                                  const std::vector<std::uint32_t>& offsets) {
  std::size_t total = 1;
  for (const auto* l : lists) {
    total *= l->size();
    if (total == 0) return {};
  }
  std::vector<WeightedPrep> out;
  out.reserve(total);
  std::vector<std::size_t> idx(lists.size(), 0);
  for (std::size_t count = 0; count < total; ++count) {
    WeightedPrep t;
    for (std::size_t i = 0; i < lists.size(); ++i) {
      const WeightedPrep& part = (*lists[i])[idx[i]];
      append_offset(t.ops, part.ops, offsets[i]);
      t.coeff *= part.coeff;
      t.s2e += part.s2e;
    }
    out.push_back(std::move(t));
    for (std::size_t i = lists.size(); i-- > 0;) {
      if (++idx[i] < lists[i]->size()) break;
      idx[i] = 0;
    }
  }
  return out;
}

// Inclusion-exclusion union: sum over combos of (uniform block | one term),
// skipping the all-uniform combo, signed by (-1)^{#terms+1}. For two children
// this is E1 U2 + U1 E2 - E1 E2.
std::vector<WeightedPrep> ie_union(const std::vector<const std::vector<WeightedPrep>*>& lists,
                                   const std::vector<std::uint32_t>& widths,
                                   const std::vector<std::uint32_t>& offsets) {
  const std::size_t m = lists.size();
  std::vector<WeightedPrep> uniforms(m);
  for (std::size_t i = 0; i < m; ++i) uniforms[i] = uniform_block(widths[i]);
  std::size_t total = 1;
  for (const auto* l : lists) total *= l->size() + 1;
  std::vector<WeightedPrep> out;
  out.reserve(total - 1);
  std::vector<std::size_t> idx(m, 0);  // 0 = uniform, 1..t = term index + 1
  for (std::size_t count = 0; count < total; ++count) {
    int picked = 0;
    for (std::size_t i = 0; i < m; ++i)
      if (idx[i] != 0) ++picked;
    if (picked != 0) {
      WeightedPrep t;
      for (std::size_t i = 0; i < m; ++i) {
        const WeightedPrep& part = idx[i] == 0 ? uniforms[i] : (*lists[i])[idx[i] - 1];
        append_offset(t.ops, part.ops, offsets[i]);
        t.coeff *= part.coeff;
        t.s2e += part.s2e;
      }
      if (picked % 2 == 0) t.coeff = -t.coeff;
      out.push_back(std::move(t));
    }
    for (std::size_t i = m; i-- > 0;) {
      if (++idx[i] < lists[i]->size() + 1) break;
      idx[i] = 0;
    }
  }
  return out;
}

std::vector<WeightedPrep> x_pattern(std::uint64_t value, std::uint32_t w) {
  WeightedPrep t;
  for (std::uint32_t j = 0; j < w; ++j)
    if ((value >> (w - 1 - j)) & 1u) t.ops.push_back(CliffordOp::x(j));
  return {std::move(t)};
}

Track build(const RPred& p);

Track build_atom_eq_const(const RPred& p) {
  Track tr;
  const std::uint32_t k = static_cast<std::uint32_t>(p.qa.size());
  tr.width = k;
  tr.pos = x_pattern(p.value, k);
  if (k == 1) {
    tr.neg = x_pattern(1 - p.value, 1);
  } else {
    tr.neg.push_back(uniform_block(k));
    for (WeightedPrep t : tr.pos) {
      t.coeff = -t.coeff;
      tr.neg.push_back(std::move(t));
    }
  }
  return tr;
}

Track build_atom_eq_vars(const RPred& p) {
  Track tr;
  const std::uint32_t k = static_cast<std::uint32_t>(p.qa.size());
  tr.width = 2 * k;
  WeightedPrep t;
  for (std::uint32_t j = 0; j < k; ++j) {
    t.ops.push_back(CliffordOp::h(j));
    t.ops.push_back(CliffordOp::cx(j, k + j));
  }
  t.s2e = static_cast<int>(k);
  tr.pos.push_back(std::move(t));
  tr.neg.push_back(uniform_block(2 * k));
  auto flipped = negated(tr.pos);
  tr.neg.insert(tr.neg.end(), flipped.begin(), flipped.end());
  return tr;
}

Track build_atom_gt(const RPred& p) {
  // a > b splits on the most significant position where they differ.
  Track tr;
  const std::uint32_t k = static_cast<std::uint32_t>(p.qa.size());
  tr.width = 2 * k;
  for (std::uint32_t l = 0; l < k; ++l) {
    WeightedPrep t;
    for (std::uint32_t j = 0; j < l; ++j) {
      t.ops.push_back(CliffordOp::h(j));
      t.ops.push_back(CliffordOp::cx(j, k + j));
    }
    t.ops.push_back(CliffordOp::x(l));
    for (std::uint32_t j = l + 1; j < k; ++j) {
      t.ops.push_back(CliffordOp::h(j));
      t.ops.push_back(CliffordOp::h(k + j));
    }
    t.s2e = static_cast<int>(2 * k - 2 - l);
    tr.pos.push_back(std::move(t));
  }
  tr.neg.push_back(uniform_block(2 * k));
  for (const WeightedPrep& t : tr.pos) {
    tr.neg.push_back(t);
    tr.neg.back().coeff = -tr.neg.back().coeff;
  }
  return tr;
}

Track build_atom_inc(const RPred& p) {
  // b = a + 1: a ends in 0 1^m, b swaps that tail to 1 0^m; plus the wrap.
  Track tr;
  const std::uint32_t k = static_cast<std::uint32_t>(p.qa.size());
  tr.width = 2 * k;
  for (std::uint32_t l = 0; l < k; ++l) {
    WeightedPrep t;
    for (std::uint32_t j = 0; j < l; ++j) {
      t.ops.push_back(CliffordOp::h(j));
      t.ops.push_back(CliffordOp::cx(j, k + j));
    }
    t.ops.push_back(CliffordOp::x(k + l));
    for (std::uint32_t j = l + 1; j < k; ++j) t.ops.push_back(CliffordOp::x(j));
    t.s2e = static_cast<int>(l);
    tr.pos.push_back(std::move(t));
  }
  WeightedPrep wrap;
  for (std::uint32_t j = 0; j < k; ++j) wrap.ops.push_back(CliffordOp::x(j));
  tr.pos.push_back(std::move(wrap));
  tr.neg.push_back(uniform_block(2 * k));
  for (const WeightedPrep& t : tr.pos) {
    tr.neg.push_back(t);
    tr.neg.back().coeff = -tr.neg.back().coeff;
  }
  return tr;
}

Track build_atom_table(const RPred& p) {
  Track tr;
  const std::uint32_t w = static_cast<std::uint32_t>(p.qa.size());
  tr.width = w;
  for (std::uint64_t row : p.rows) {
    auto one = x_pattern(row, w);
    tr.pos.push_back(std::move(one[0]));
  }
  const std::uint64_t domain = std::uint64_t{1} << w;
  const std::uint64_t missing = domain - p.rows.size();
  if (missing <= p.rows.size() + 1) {
    std::size_t next = 0;
    for (std::uint64_t z = 0; z < domain; ++z) {
      if (next < p.rows.size() && p.rows[next] == z) {
        ++next;
        continue;
      }
      auto one = x_pattern(z, w);
      tr.neg.push_back(std::move(one[0]));
    }
  } else {
    tr.neg.push_back(uniform_block(w));
    for (const WeightedPrep& t : tr.pos) {
      tr.neg.push_back(t);
      tr.neg.back().coeff = -tr.neg.back().coeff;
    }
  }
  return tr;
}

Track build_connective(const RPred& p) {
  std::vector<Track> kids;
  kids.reserve(p.children.size());
  std::vector<std::uint32_t> widths, offsets;
  std::uint32_t off = 0;
  for (const RPred& ch : p.children) {
    kids.push_back(build(ch));
    widths.push_back(kids.back().width);
    offsets.push_back(off);
    off += kids.back().width;
  }
  std::vector<const std::vector<WeightedPrep>*> pos_lists, neg_lists;
  for (const Track& k : kids) {
    pos_lists.push_back(&k.pos);
    neg_lists.push_back(&k.neg);
  }
  auto count_product = [](const std::vector<const std::vector<WeightedPrep>*>& ls) {
    std::size_t n = 1;
    for (const auto* l : ls) n *= l->size();
    return n;
  };
  auto count_union = [](const std::vector<const std::vector<WeightedPrep>*>& ls) {
    std::size_t n = 1;
    for (const auto* l : ls) n *= l->size() + 1;
    return n - 1;
  };

  Track tr;
  tr.width = off;
  if (p.kind == Pred::Kind::And) {
    tr.pos = product(pos_lists, offsets);
    // not(and) is or(not): either expand the union or subtract from uniform.
    if (count_union(neg_lists) <= count_product(pos_lists) + 1) {
      tr.neg = ie_union(neg_lists, widths, offsets);
    } else {
      tr.neg.push_back(uniform_block(off));
      for (const WeightedPrep& t : tr.pos) {
        tr.neg.push_back(t);
        tr.neg.back().coeff = -tr.neg.back().coeff;
      }
    }
  } else {
    tr.neg = product(neg_lists, offsets);
    if (count_union(pos_lists) <= count_product(neg_lists) + 1) {
      tr.pos = ie_union(pos_lists, widths, offsets);
    } else {
      tr.pos.push_back(uniform_block(off));
      for (const WeightedPrep& t : tr.neg) {
        tr.pos.push_back(t);
        tr.pos.back().coeff = -tr.pos.back().coeff;
      }
    }
  }
  return tr;
}

Track build(const RPred& p) {
  switch (p.kind) {
    case Pred::Kind::True: {
      Track tr;
      tr.pos.push_back(WeightedPrep{});
      return tr;
    }
    case Pred::Kind::False: {
      Track tr;
      tr.neg.push_back(WeightedPrep{});
      return tr;
    }
    case Pred::Kind::EqConst:
      return build_atom_eq_const(p);
    case Pred::Kind::EqVars:
      return build_atom_eq_vars(p);
    case Pred::Kind::Gt:
      return build_atom_gt(p);
    case Pred::Kind::Inc:
      return build_atom_inc(p);
    case Pred::Kind::Table:
      return build_atom_table(p);
    case Pred::Kind::Not: {
      Track tr = build(p.children[0]);
      std::swap(tr.pos, tr.neg);
      return tr;
    }
    case Pred::Kind::And:
    case Pred::Kind::Or:
      return build_connective(p);
  }
  return {};
}

void prune(std::vector<WeightedPrep>& terms) {
  std::erase_if(terms, [](const WeightedPrep& t) {
    return std::abs(t.coeff) * pow_sqrt2(t.s2e) <= kPruneEps;
  });
}

}  // namespace

RPred resolve_pred(const Pred& p, const Circuit& c) {
  RPred r;
  r.kind = p.kind;
  switch (p.kind) {
    case Pred::Kind::True:
    case Pred::Kind::False:
      break;
    case Pred::Kind::EqConst:
      r.qa = c.find_register(p.rega)->qubits;
      r.value = p.value;
      break;
    case Pred::Kind::EqVars:
    case Pred::Kind::Gt:
    case Pred::Kind::Inc:
      r.qa = c.find_register(p.rega)->qubits;
      r.qb = c.find_register(p.regb)->qubits;
      break;
    case Pred::Kind::Table:
      for (const std::string& rn : p.regs) {
        const Register& reg = *c.find_register(rn);
        r.qa.insert(r.qa.end(), reg.qubits.begin(), reg.qubits.end());
      }
      r.rows = p.rows;
      break;
    case Pred::Kind::Not:
    case Pred::Kind::And:
    case Pred::Kind::Or:
      for (const Pred& ch : p.children) r.children.push_back(resolve_pred(ch, c));
      break;
  }
  return r;
}

std::vector<std::uint32_t> pred_slot_layout(const RPred& p) {
  std::vector<std::uint32_t> out;
  switch (p.kind) {
    case Pred::Kind::True:
    case Pred::Kind::False:
      break;
    case Pred::Kind::EqConst:
    case Pred::Kind::Table:
      out = p.qa;
      break;
    case Pred::Kind::EqVars:
    case Pred::Kind::Gt:
    case Pred::Kind::Inc:
      out = p.qa;
      out.insert(out.end(), p.qb.begin(), p.qb.end());
      break;
    case Pred::Kind::Not:
    case Pred::Kind::And:
    case Pred::Kind::Or:
      for (const RPred& ch : p.children) {
        auto sub = pred_slot_layout(ch);
        out.insert(out.end(), sub.begin(), sub.end());
      }
      break;
  }
  return out;
}

EffectualPair build_effectual(const RPred& p) {
  Track tr = build(p);
  EffectualPair out;
  out.pos = std::move(tr.pos);
  out.neg = std::move(tr.neg);
  out.width = tr.width;
  return out;
}

double model_count(const std::vector<WeightedPrep>& terms, std::uint32_t) {
  // Every prep here uses H/CX/X only, so each term's amplitude sum is
  // 2^{h/2} with h the number of H gates.
  double total = 0.0;
  for (const WeightedPrep& t : terms) {
    int h = 0;
    for (const CliffordOp& op : t.ops)
      if (op.kind == CliffordOp::Kind::H) ++h;
    total += t.coeff.real() * pow_sqrt2(t.s2e + h);
  }
  return total;
}

std::vector<WeightedPrep> build_magic_diag(const RPred& p, double theta) {
  EffectualPair pair = build_effectual(p);
  const std::uint32_t w = pair.width;
  const cdouble f = std::polar(1.0, theta) - 1.0;
  std::vector<WeightedPrep> terms;
  WeightedPrep uni;
  for (std::uint32_t j = 0; j < w; ++j) uni.ops.push_back(CliffordOp::h(j));
  terms.push_back(std::move(uni));
  for (WeightedPrep& t : pair.pos) {
    t.coeff *= f;
    t.s2e -= static_cast<int>(w);
    terms.push_back(std::move(t));
  }
  prune(terms);
  return terms;
}

std::vector<WeightedPrep> build_magic_cond_rz(const RPred& p, double theta) {
  EffectualPair pair = build_effectual(p);
  const std::uint32_t w = pair.width;
  const cdouble f = std::polar(1.0, theta) - 1.0;
  std::vector<WeightedPrep> terms;
  WeightedPrep uni;
  for (std::uint32_t j = 0; j < w + 1; ++j) uni.ops.push_back(CliffordOp::h(j));
  terms.push_back(std::move(uni));
  for (WeightedPrep& t : pair.pos) {
    t.ops.push_back(CliffordOp::x(w));
    t.coeff *= f;
    t.s2e -= static_cast<int>(w + 1);
    terms.push_back(std::move(t));
  }
  prune(terms);
  return terms;
}

std::vector<WeightedPrep> build_magic_teleport(const RPred& p, const Unitary2& u) {
  EffectualPair pair = build_effectual(p);
  const std::uint32_t w = pair.width;
  std::vector<WeightedPrep> terms;
  WeightedPrep uni;
  for (std::uint32_t j = 0; j < w; ++j) uni.ops.push_back(CliffordOp::h(j));
  uni.ops.push_back(CliffordOp::h(w));
  uni.ops.push_back(CliffordOp::cx(w, w + 1));
  terms.push_back(std::move(uni));
  const cdouble entries[2][2] = {{u.u00 - 1.0, u.u10}, {u.u01, u.u11 - 1.0}};  // [c][d]
  for (const WeightedPrep& base : pair.pos) {
    for (int c = 0; c < 2; ++c) {
      for (int d = 0; d < 2; ++d) {
        const cdouble val = entries[c][d];
        WeightedPrep t = base;
        if (c) t.ops.push_back(CliffordOp::x(w));
        if (d) t.ops.push_back(CliffordOp::x(w + 1));
        t.coeff *= val;
        t.s2e -= static_cast<int>(w + 1);
        terms.push_back(std::move(t));
      }
    }
  }
  prune(terms);
  return terms;
}

std::vector<WeightedPrep> build_magic_phase_single(double theta) {
  std::vector<WeightedPrep> terms;
  WeightedPrep uni;
  uni.ops.push_back(CliffordOp::h(0));
  terms.push_back(std::move(uni));
  WeightedPrep one;
  one.ops.push_back(CliffordOp::x(0));
  one.coeff = std::polar(1.0, theta) - 1.0;
  one.s2e = -1;
  terms.push_back(std::move(one));
  prune(terms);
  return terms;
}

}  // namespace hqsim
