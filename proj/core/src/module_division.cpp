#include "maval/module_division.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "maval/linalg.hpp"
#include "maval/rng.hpp"

namespace maval {

namespace {

// The registry must be a full matrix block with n rows and k+1 tagged columns.
void validate_module_registry(const VariableRegistry::Ptr& reg, int n, int k, const char* where) {
  if (!reg) throw_schema(std::string(where) + ": missing registry");
  require_domain(n >= 1 && k >= 0, std::string(where) + ": need n >= 1, k >= 0");
  if (reg->max_col() != k + 1)
    throw_schema(std::string(where) + ": registry must have " + std::to_string(k + 1) +
                 " variable columns");
  for (int c = 1; c <= k + 1; ++c) {
    if (static_cast<int>(reg->column(c).size()) != n)
      throw_schema(std::string(where) + ": column " + std::to_string(c) + " must have " +
                   std::to_string(n) + " variables");
  }
}

// Splits a monomial into its first-k-column part and its last-column part.
std::pair<Monomial, Monomial> split_by_column(const VariableRegistry& reg, const Monomial& m,
                                              int k) {
  std::vector<Monomial::Entry> first, last;
  for (const auto& [idx, exp] : m.entries()) {
    const int col = reg.var(idx).col;
    if (col >= 1 && col <= k)
      first.emplace_back(idx, exp);
    else if (col == k + 1)
      last.emplace_back(idx, exp);
    else
      throw_domain("module division: variable " + reg.name(idx) + " has no matrix column");
  }
  return {Monomial::from_entries(std::move(first)), Monomial::from_entries(std::move(last))};
}

bool column_homogeneous_in(const Polynomial& p, int col) {
  bool seen = false;
  uint32_t deg = 0;
  const auto& reg = *p.registry();
  for (const auto& [m, c] : p.terms()) {
    uint32_t d = 0;
    for (const auto& [idx, exp] : m.entries())
      if (reg.var(idx).col == col) d += exp;
    if (!seen) {
      deg = d;
      seen = true;
    } else if (d != deg) {
      return false;
    }
  }
  return true;
}

}  // namespace

Polynomial embed_by_name(const Polynomial& p, const VariableRegistry::Ptr& target) {
  if (!target) throw_schema("embed_by_name: missing target registry");
  if (!p.registry()) throw_domain("embed_by_name: polynomial without a registry");
  if (p.registry()->same_as(*target)) {
    Polynomial out(target);
    for (const auto& [m, c] : p.terms()) out.add_term(m, c);
    return out;
  }
  Polynomial out(target);
  for (const auto& [m, c] : p.terms()) {
    std::vector<Monomial::Entry> entries;
    entries.reserve(m.entries().size());
    for (const auto& [idx, exp] : m.entries())
      entries.emplace_back(target->require(p.registry()->name(idx)), exp);
    out.add_term(Monomial::from_entries(std::move(entries)), c);
  }
  return out;
}

GroebnerModuleBasis build_groebner(const std::vector<Polynomial>& generators, int n, int k,
                                   VariableRegistry::Ptr registry) {
  if (!registry) registry = VariableRegistry::matrix(n, k + 1, "w");
  validate_module_registry(registry, n, k, "build_groebner");

  GroebnerModuleBasis out;
  out.n = n;
  out.k = k;
  out.registry = registry;
  {
    std::ostringstream os;
    os << "lex, " << registry->name(0) << " largest, column-major; module action through column "
       << (k + 1);
    out.order = os.str();
  }

  SpanBuilder span(registry);
  for (const auto& g : generators) {
    Polynomial e = embed_by_name(g, registry);
    if (e.is_zero()) continue;
    if (!e.is_homogeneous()) throw_domain("build_groebner: non-homogeneous generator");
    if (!e.uses_only_columns(1, k))
      throw_domain("build_groebner: generator uses variables outside the first " +
                   std::to_string(k) + " columns");
    span.insert(e);
  }

  // Full inter-reduction: eliminate every pivot monomial from every other
  // row's support.  The result is the unique reduced basis of the span.
  std::vector<Polynomial> rows = span.echelon_rows();
  std::map<Monomial, size_t, LexGreater> leads;
  for (size_t i = 0; i < rows.size(); ++i) leads.emplace(rows[i].leading_term().first, i);
  bool changed = true;
  while (changed) {
    changed = false;
    for (size_t i = 0; i < rows.size() && !changed; ++i) {
      const Monomial own = rows[i].leading_term().first;
      for (const auto& term : rows[i].terms()) {
        if (term.first == own) continue;
        auto it = leads.find(term.first);
        if (it == leads.end()) continue;
        const GaussianRational c = term.second;  // copy: the map node is erased below
        Polynomial scaled = rows[it->second];
        scaled *= c;
        rows[i] -= scaled;
        changed = true;
        break;
      }
    }
  }
  std::sort(rows.begin(), rows.end(), [](const Polynomial& a, const Polynomial& b) {
    return Monomial::lex_cmp(a.leading_term().first, b.leading_term().first) > 0;
  });
  out.generators = std::move(rows);
  out.homogeneous = std::all_of(out.generators.begin(), out.generators.end(),
                                [](const Polynomial& p) { return p.is_homogeneous(); });
  out.minimal = true;
  verify_module_basis(out);
  return out;
}

void verify_module_basis(const GroebnerModuleBasis& basis) {
  validate_module_registry(basis.registry, basis.n, basis.k, "verify_module_basis");
  std::map<Monomial, size_t, LexGreater> leads;
  for (size_t i = 0; i < basis.generators.size(); ++i) {
    const auto& g = basis.generators[i];
    require_invariant(!g.is_zero(), "module basis: zero generator");
    require_invariant(g.uses_only_columns(1, basis.k),
                      "module basis: generator outside first-k columns");
    const auto [lead, lc] = g.leading_term();
    require_invariant(lc == GaussianRational(1), "module basis: non-monic generator");
    require_invariant(leads.emplace(lead, i).second, "module basis: duplicate initial monomial");
  }
  // Reducedness: no initial monomial may appear in any other element.  With
  // initial monomials confined to the first k columns and pairwise distinct,
  // no module multiple of one can match another, so every S-pair vanishes.
  for (size_t i = 0; i < basis.generators.size(); ++i) {
    for (const auto& [m, c] : basis.generators[i].terms()) {
      auto it = leads.find(m);
      require_invariant(it == leads.end() || it->second == i,
                        "module basis: initial monomial occurs in another element");
    }
  }
}

ModuleDivision divide(const Polynomial& F, const GroebnerModuleBasis& basis) {
  validate_module_registry(basis.registry, basis.n, basis.k, "divide");
  ensure_same_registry(F.registry(), basis.registry, "module divide");
  const auto& reg = *basis.registry;

  std::map<Monomial, size_t, LexGreater> leads;
  for (size_t i = 0; i < basis.generators.size(); ++i)
    leads.emplace(basis.generators[i].leading_term().first, i);

  ModuleDivision out;
  out.quotients.assign(basis.generators.size(), Polynomial::zero(basis.registry));
  out.remainder = Polynomial::zero(basis.registry);

  Polynomial work = F;
  while (!work.is_zero()) {
    const auto [m, c] = work.leading_term();
    const auto [first, last] = split_by_column(reg, m, basis.k);
    auto it = leads.find(first);
    if (it == leads.end()) {
      out.remainder.add_term(m, c);
      work.add_term(m, -c);
      continue;
    }
    const size_t j = it->second;
    out.quotients[j].add_term(last, c);
    Polynomial scaled = Polynomial::term(basis.registry, last, c);
    scaled *= basis.generators[j];
    work -= scaled;
  }
  return out;
}

std::vector<Polynomial> decompose_in_m2k(const Polynomial& F, int n, int k,
                                         const MinorBasis& basis) {
  validate_module_registry(F.registry(), n, k, "decompose_in_m2k");
  require_domain(basis.n == n && basis.k == k, "decompose_in_m2k: basis is for different (n, k)");
  GroebnerModuleBasis gb = build_groebner(basis.generators, n, k, F.registry());

  ModuleDivision div = divide(F, gb);
  if (!div.remainder.is_zero())
    throw NotInModuleError("decompose_in_m2k: not in module; remainder = " +
                               div.remainder.to_string(),
                           div.remainder);

  // Express every reduced-basis element in the caller's generators; transport
  // the quotients through the same exact change of basis.
  SpanBuilder span(F.registry());
  for (const auto& q : basis.generators) {
    const bool enlarged = span.insert(embed_by_name(q, F.registry()));
    require_invariant(enlarged, "decompose_in_m2k: dependent minor-basis generator");
  }
  std::vector<Polynomial> out(basis.generators.size(), Polynomial::zero(F.registry()));
  for (size_t i = 0; i < gb.generators.size(); ++i) {
    auto coords = span.coordinates(gb.generators[i]);
    require_invariant(coords.has_value(),
                      "decompose_in_m2k: reduced basis escapes the generator span");
    for (size_t j = 0; j < out.size(); ++j) {
      if ((*coords)[j].is_zero() || div.quotients[i].is_zero()) continue;
      out[j] += div.quotients[i] * (*coords)[j];
    }
  }
  return out;
}

bool membership_by_restriction(const Polynomial& F, int n, int k, int trials, uint64_t seed) {
  validate_module_registry(F.registry(), n, k, "membership_by_restriction");
  require_domain(trials >= 1, "membership_by_restriction: need trials >= 1");
  const auto& reg = *F.registry();
  for (int c = 1; c <= k; ++c)
    if (!column_homogeneous_in(F, c))
      throw_domain("membership_by_restriction: input is not column-homogeneous in column " +
                   std::to_string(c));
  if (F.is_zero()) return true;
  if (k == 0) return true;  // the 0-minor module is everything

  // Combined registry: a k-by-k block z (columns 1..k) followed by the
  // original last-column variables.
  std::vector<Variable> vars;
  for (int j = 1; j <= k; ++j)
    for (int i = 1; i <= k; ++i)
      vars.push_back({"z_" + std::to_string(i) + "_" + std::to_string(j), i, j});
  const std::vector<uint32_t> last_col = reg.column(k + 1);
  for (int r = 1; r <= n; ++r)
    vars.push_back({reg.name(last_col[static_cast<size_t>(r - 1)]), r, k + 1});
  const VariableRegistry::Ptr target = VariableRegistry::create(std::move(vars));
  const auto zvar = [&](int i, int j) {
    return static_cast<uint32_t>((j - 1) * k + (i - 1));
  };

  std::vector<std::vector<Polynomial>> zmat(static_cast<size_t>(k));
  for (int i = 1; i <= k; ++i)
    for (int j = 1; j <= k; ++j)
      zmat[static_cast<size_t>(i - 1)].push_back(Polynomial::variable(target, zvar(i, j)));
  const Polynomial det_sq = polynomial_determinant(zmat).pow(2);
  const auto [det_lead, det_lc] = det_sq.leading_term();

  Rng rng(seed);
  for (int trial = 0; trial < trials; ++trial) {
    // Integer frame B with full column rank (resampled on degeneracy).
    std::vector<std::vector<GaussianRational>> B;
    bool ok = false;
    for (int attempt = 0; attempt < 100 && !ok; ++attempt) {
      B.assign(static_cast<size_t>(n), {});
      for (auto& row : B) {
        row.clear();
        for (int j = 0; j < k; ++j) row.emplace_back(Rational(rng.integer(-5, 5)));
      }
      ok = matrix_rank(B) == static_cast<size_t>(k);
    }
    if (!ok) throw_domain("membership_by_restriction: degenerate sampled subspace");

    // w_{r,c} -> sum_s B[r][s] z_{s,c} for c <= k; last column carried over.
    std::vector<Polynomial> images(reg.size(), Polynomial::zero(target));
    for (uint32_t idx = 0; idx < reg.size(); ++idx) {
      const Variable& v = reg.var(idx);
      if (v.col >= 1 && v.col <= k) {
        Polynomial img(target);
        for (int s = 1; s <= k; ++s)
          img += Polynomial::variable(target, zvar(s, v.col)) *
                 B[static_cast<size_t>(v.row - 1)][static_cast<size_t>(s - 1)];
        images[idx] = img;
      } else {
        images[idx] = Polynomial::variable(target, target->require(v.name));
      }
    }
    const Polynomial restricted = F.substitute(images);

    // Group by last-column monomial; every z-coefficient must be an exact
    // scalar multiple of det(z)^2.
    std::map<Monomial, Polynomial, LexGreater> groups;
    for (const auto& [m, c] : restricted.terms()) {
      const auto [zpart, wpart] = split_by_column(*target, m, k);
      auto [it, fresh] = groups.emplace(wpart, Polynomial::zero(target));
      it->second.add_term(zpart, c);
    }
    for (const auto& [wpart, zpoly] : groups) {
      if (zpoly.is_zero()) continue;
      const GaussianRational lambda = zpoly.coefficient(det_lead) / det_lc;
      if (zpoly != det_sq * lambda) return false;
    }
  }
  return true;
}

}  // namespace maval
