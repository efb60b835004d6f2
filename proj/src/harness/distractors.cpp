#include "cktbench/harness/distractors.hpp"

#include <algorithm>

namespace cktbench::harness {

using symexpr::Polynomial;
using symexpr::Rational;
using symexpr::Term;

namespace {

Polynomial with_term(const Polynomial& p, std::size_t index, const Rational& factor) {
  std::vector<Term> terms = p.terms();
  terms[index].coeff *= factor;
  return Polynomial::from_terms(p.vars(), std::move(terms));
}

// Picks the numerator or the denominator, weighted by term count.
bool pick_numerator(const RationalFunc& rf, Rng& rng) {
  const std::size_t n = rf.numerator().size(), d = rf.denominator().size();
  return rng.below(n + d) < n;
}

}  // namespace

RationalFunc mutate(const RationalFunc& truth, Mutation kind, Rng& rng) {
  const Polynomial& num = truth.numerator();
  const Polynomial& den = truth.denominator();
  switch (kind) {
    case Mutation::CoefficientScale: {
      static const Rational factors[] = {Rational(2), Rational(3), Rational(1, 2)};
      const Rational f = factors[rng.below(3)];
      if (pick_numerator(truth, rng)) return RationalFunc(with_term(num, rng.below(num.size()), f), den);
      return RationalFunc(num, with_term(den, rng.below(den.size()), f));
    }
    case Mutation::SignFlip: {
      if (pick_numerator(truth, rng)) return RationalFunc(with_term(num, rng.below(num.size()), Rational(-1)), den);
      return RationalFunc(num, with_term(den, rng.below(den.size()), Rational(-1)));
    }
    case Mutation::Reciprocal:
      return truth.reciprocal();
    case Mutation::SymbolSubstitution: {
      std::vector<std::string> names;
      for (const auto& n : truth.symbols()) {
        if (n != symexpr::kFrequencyVar) names.push_back(n);
      }
      if (names.size() >= 2) {
        const std::size_t a = rng.below(names.size());
        std::size_t b = rng.below(names.size() - 1);
        if (b >= a) ++b;
        return RationalFunc(num.rename(names[a], names[b]), den.rename(names[a], names[b]));
      }
      // One symbol or none: square it, or stretch s.
      const std::string var = names.empty() ? std::string(symexpr::kFrequencyVar) : names.front();
      const Polynomial value =
          names.empty() ? Polynomial::variable(var).scaled(Rational(2)) : Polynomial::variable(var, 2);
      return RationalFunc(num.substitute(var, value), den.substitute(var, value));
    }
    case Mutation::TimesS: {
      const RationalFunc s = RationalFunc::symbol(symexpr::kFrequencyVar);
      return rng.chance(0.5) ? truth * s : truth / s;
    }
  }
  return truth;
}

std::array<RationalFunc, 3> gen_distractors(const RationalFunc& truth, Rng& rng,
                                            const equiv::SamplingConfig& sampling, int max_tries) {
  std::vector<RationalFunc> found;
  for (int attempt = 0; attempt < max_tries && found.size() < 3; ++attempt) {
    // Cycle the mutation kinds so each distractor tends to differ in kind.
    const auto kind = static_cast<Mutation>((attempt + rng.below(5)) % 5);
    RationalFunc cand;
    try {
      cand = mutate(truth, kind, rng);
    } catch (const std::exception&) {
      continue;
    }
    auto differs = [&](const RationalFunc& other) {
      return equiv::check_equivalence(cand, other, sampling).outcome == equiv::Outcome::NotEquivalent;
    };
    if (!differs(truth)) continue;
    if (!std::all_of(found.begin(), found.end(), differs)) continue;
    found.push_back(std::move(cand));
  }
  if (found.size() < 3) {
    throw MutationExhausted("only " + std::to_string(found.size()) + " distractors after " +
                            std::to_string(max_tries) + " tries for " + symexpr::format_canonical(truth));
  }
  return {found[0], found[1], found[2]};
}

McOptions build_mc(const RationalFunc& truth, Rng& rng, double omit_truth, const equiv::SamplingConfig& sampling) {
  const auto d = gen_distractors(truth, rng, sampling);
  const bool omit = rng.chance(omit_truth);
  std::vector<std::string> first{symexpr::format_canonical(d[0]), symexpr::format_canonical(d[1])};
  first.push_back(omit ? symexpr::format_canonical(d[2]) : symexpr::format_canonical(truth));
  std::vector<std::size_t> order{0, 1, 2};
  rng.shuffle(order);
  McOptions mc;
  for (std::size_t i = 0; i < 3; ++i) {
    mc.options[i] = first[order[i]];
    if (!omit && order[i] == 2) mc.key = static_cast<char>('A' + i);
  }
  mc.options[3] = std::string(kNoneOfTheAbove);
  if (omit) mc.key = 'D';
  return mc;
}

}  // namespace cktbench::harness
