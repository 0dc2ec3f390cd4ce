#include "contactmech/exterior.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <utility>

namespace contactmech {

namespace {

void checkTuple(const IndexTuple& idx, int dim, int degree) {
  if (static_cast<int>(idx.size()) != degree)
    throw std::invalid_argument("index tuple length does not match form degree");
  for (std::size_t i = 0; i < idx.size(); ++i) {
    if (idx[i] < 0 || idx[i] >= dim) throw std::invalid_argument("form index out of range");
    if (i > 0 && idx[i] <= idx[i - 1])
      throw std::invalid_argument("form indices must be strictly increasing");
  }
}

// Merge two sorted disjoint tuples, counting inversions of the concatenation
// (I, J). Returns nullopt if the tuples share an index.
std::optional<std::pair<IndexTuple, int>> mergeSigned(const IndexTuple& a, const IndexTuple& b) {
  IndexTuple merged;
  merged.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  int inversions = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] == b[j]) return std::nullopt;
    if (a[i] < b[j]) {
      merged.push_back(a[i++]);
    } else {
      merged.push_back(b[j++]);
      inversions += static_cast<int>(a.size() - i);
    }
  }
  while (i < a.size()) merged.push_back(a[i++]);
  while (j < b.size()) merged.push_back(b[j++]);
  return std::make_pair(std::move(merged), inversions % 2 == 0 ? 1 : -1);
}

void requireSameSpace(const FormExpr& a, const FormExpr& b) {
  if (a.coords != b.coords) throw std::invalid_argument("forms live on different coordinate spaces");
}

}  // namespace

double FormValue::maxAbs() const {
  double m = 0.0;
  for (const auto& [idx, v] : comps) m = std::max(m, std::abs(v));
  return m;
}

FormExpr FormExpr::zero(std::vector<std::string> coords, int degree) {
  FormExpr f;
  f.coords = std::move(coords);
  f.degree = degree;
  return f;
}

FormExpr FormExpr::scalar(std::vector<std::string> coords, const Expr& value) {
  FormExpr f = zero(std::move(coords), 0);
  f.set({}, value);
  return f;
}

FormExpr FormExpr::covector(std::vector<std::string> coords,
                            const std::map<int, Expr>& coefficients) {
  FormExpr f = zero(std::move(coords), 1);
  for (const auto& [i, e] : coefficients) f.set({i}, e);
  return f;
}

void FormExpr::set(IndexTuple idx, const Expr& value) {
  checkTuple(idx, dim(), degree);
  Expr s = value.simplified();
  if (s.isConstant(0.0)) {
    comps.erase(idx);
  } else {
    comps.insert_or_assign(std::move(idx), std::move(s));
  }
}

Expr FormExpr::coefficient(const IndexTuple& idx) const {
  auto it = comps.find(idx);
  return it == comps.end() ? Expr::constant(0.0) : it->second;
}

FormExpr exteriorDerivative(const FormExpr& f) {
  if (f.degree > 1)
    throw std::domain_error("exteriorDerivative supports degrees 0 and 1 only");
  const int d = f.dim();
  FormExpr out = FormExpr::zero(f.coords, f.degree + 1);
  std::map<IndexTuple, Expr> acc;
  auto accumulate = [&acc](IndexTuple idx, const Expr& e) {
    auto it = acc.find(idx);
    if (it == acc.end()) {
      acc.emplace(std::move(idx), e);
    } else {
      it->second = it->second + e;
    }
  };
  for (const auto& [idx, coefficient] : f.comps) {
    for (int j = 0; j < d; ++j) {
      Expr partial = coefficient.diff(f.coords[static_cast<std::size_t>(j)]);
      if (partial.isConstant(0.0)) continue;
      if (f.degree == 0) {
        accumulate({j}, partial);
      } else {
        int i = idx[0];
        if (j == i) continue;
        if (j < i) {
          accumulate({j, i}, partial);
        } else {
          accumulate({i, j}, -partial);
        }
      }
    }
  }
  for (auto& [idx, e] : acc) out.set(idx, e);
  return out;
}

FormValue evalForm(const FormExpr& f, const Bindings& b) {
  FormValue out;
  out.dim = f.dim();
  out.degree = f.degree;
  for (const auto& [idx, e] : f.comps) {
    double v = e.eval(b);
    if (v != 0.0) out.comps.emplace(idx, v);
  }
  return out;
}

FormValue wedge(const FormValue& a, const FormValue& b) {
  if (a.dim != b.dim) throw std::invalid_argument("wedge: dimension mismatch");
  if (a.degree + b.degree > a.dim)
    throw std::invalid_argument("wedge: degree exceeds dimension");
  FormValue out;
  out.dim = a.dim;
  out.degree = a.degree + b.degree;
  for (const auto& [ia, va] : a.comps) {
    for (const auto& [ib, vb] : b.comps) {
      auto merged = mergeSigned(ia, ib);
      if (!merged) continue;
      out.comps[merged->first] += merged->second * va * vb;
    }
  }
  std::erase_if(out.comps, [](const auto& kv) { return kv.second == 0.0; });
  return out;
}

FormValue contract(const VectorValue& x, const FormValue& f) {
  if (static_cast<int>(x.size()) != f.dim)
    throw std::invalid_argument("contract: dimension mismatch");
  if (f.degree < 1) throw std::invalid_argument("contract: form degree must be at least 1");
  FormValue out;
  out.dim = f.dim;
  out.degree = f.degree - 1;
  for (const auto& [idx, v] : f.comps) {
    for (std::size_t t = 0; t < idx.size(); ++t) {
      double xi = x[static_cast<std::size_t>(idx[t])];
      if (xi == 0.0) continue;
      IndexTuple rest;
      rest.reserve(idx.size() - 1);
      for (std::size_t r = 0; r < idx.size(); ++r)
        if (r != t) rest.push_back(idx[r]);
      double s = (t % 2 == 0) ? 1.0 : -1.0;
      out.comps[rest] += s * xi * v;
    }
  }
  std::erase_if(out.comps, [](const auto& kv) { return kv.second == 0.0; });
  return out;
}

FormExpr wedgeExpr(const FormExpr& a, const FormExpr& b) {
  requireSameSpace(a, b);
  if (a.degree + b.degree > 2)
    throw std::domain_error("wedgeExpr supports result degrees up to 2 only");
  FormExpr out = FormExpr::zero(a.coords, a.degree + b.degree);
  std::map<IndexTuple, Expr> acc;
  for (const auto& [ia, ea] : a.comps) {
    for (const auto& [ib, eb] : b.comps) {
      auto merged = mergeSigned(ia, ib);
      if (!merged) continue;
      Expr term = ea * eb;
      if (merged->second < 0) term = -term;
      auto it = acc.find(merged->first);
      if (it == acc.end()) {
        acc.emplace(merged->first, term);
      } else {
        it->second = it->second + term;
      }
    }
  }
  for (auto& [idx, e] : acc) out.set(idx, e);
  return out;
}

FormExpr contractExpr(const std::vector<Expr>& x, const FormExpr& f) {
  if (static_cast<int>(x.size()) != f.dim())
    throw std::invalid_argument("contractExpr: dimension mismatch");
  if (f.degree < 1)
    throw std::invalid_argument("contractExpr: form degree must be at least 1");
  FormExpr out = FormExpr::zero(f.coords, f.degree - 1);
  std::map<IndexTuple, Expr> acc;
  for (const auto& [idx, e] : f.comps) {
    for (std::size_t t = 0; t < idx.size(); ++t) {
      const Expr& xi = x[static_cast<std::size_t>(idx[t])];
      IndexTuple rest;
      rest.reserve(idx.size() - 1);
      for (std::size_t r = 0; r < idx.size(); ++r)
        if (r != t) rest.push_back(idx[r]);
      Expr term = xi * e;
      if (t % 2 == 1) term = -term;
      auto it = acc.find(rest);
      if (it == acc.end()) {
        acc.emplace(std::move(rest), term);
      } else {
        it->second = it->second + term;
      }
    }
  }
  for (auto& [idx, e] : acc) out.set(idx, e);
  return out;
}

FormExpr addForms(const FormExpr& a, const FormExpr& b) {
  requireSameSpace(a, b);
  if (a.degree != b.degree) throw std::invalid_argument("addForms: degree mismatch");
  FormExpr out = FormExpr::zero(a.coords, a.degree);
  std::map<IndexTuple, Expr> acc = a.comps;
  for (const auto& [idx, e] : b.comps) {
    auto it = acc.find(idx);
    if (it == acc.end()) {
      acc.emplace(idx, e);
    } else {
      it->second = it->second + e;
    }
  }
  for (auto& [idx, e] : acc) out.set(idx, e);
  return out;
}

FormExpr scaleForm(const Expr& factor, const FormExpr& f) {
  FormExpr out = FormExpr::zero(f.coords, f.degree);
  for (const auto& [idx, e] : f.comps) out.set(idx, factor * e);
  return out;
}

double contactVolumeCoefficient(const FormExpr& eta, const Bindings& b, int n) {
  if (eta.degree != 1) throw std::invalid_argument("contact form must have degree 1");
  if (eta.dim() != 2 * n + 1)
    throw std::invalid_argument("contact form dimension must be 2n+1");
  FormValue etaV = evalForm(eta, b);
  FormValue detaV = evalForm(exteriorDerivative(eta), b);
  FormValue acc = etaV;
  double factorial = 1.0;
  for (int k = 1; k <= n; ++k) {
    acc = wedge(acc, detaV);
    factorial *= k;
  }
  IndexTuple top(static_cast<std::size_t>(2 * n + 1));
  for (int i = 0; i < 2 * n + 1; ++i) top[static_cast<std::size_t>(i)] = i;
  return acc.coefficient(top) / factorial;
}

}  // namespace contactmech
