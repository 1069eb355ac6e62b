#pragma once

// The finite-level tower: truncations F ∩ V_n, the embedding into level n+1,
// lifting finite flags back to specs, group elements carrying one flag to a
// commensurable one, and stabilizer dimensions.

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include "genflag/commens.hpp"
#include "genflag/flagcore.hpp"

namespace genflag {

inline FiniteFlag truncate(const GeneralizedFlagSpec& s, int64_t n) { return truncate_frame(frame_of(s), n); }

/// Labels and step dimensions of the flag presented by f at level n.
inline std::pair<std::vector<Label>, std::vector<size_t>> type_at(const Frame& f, int64_t n) {
  std::pair<std::vector<Label>, std::vector<size_t>> out;
  out.second.push_back(0);
  for (const auto& [lab, slots] : f.classes(n)) {
    out.first.push_back(lab);
    out.second.push_back(out.second.back() + slots.size());
  }
  return out;
}

inline void check_type(const FiniteFlag& f, const Frame& ref) {
  auto [labels, dims] = type_at(ref, f.level);
  if (f.layout != ref.layout || f.labels != labels || f.dims() != dims)
    fail(ErrorCode::TypeMismatch, "finite flag does not have the reference type at level " + std::to_string(f.level));
}

/// Adds e_slot to every step with label >= lab, opening a new step if lab is new.
inline FiniteFlag insert_slot(FiniteFlag f, Slot slot, const Label& lab) {
  auto it = std::lower_bound(f.labels.begin(), f.labels.end(), lab);
  size_t k = static_cast<size_t>(it - f.labels.begin());
  if (it == f.labels.end() || *it != lab) {
    f.labels.insert(it, lab);
    f.steps.insert(f.steps.begin() + static_cast<std::ptrdiff_t>(k),
                   k == 0 ? std::vector<VectorFS>{} : f.steps[k - 1]);
  }
  for (size_t j = k; j < f.steps.size(); ++j) {
    f.steps[j].push_back(VectorFS::unit(slot));
    f.steps[j] = rref(f.steps[j]);
  }
  return f;
}

struct EmbedInfo {
  size_t j = 0;         // 1-based index of the class receiving e_{n+1}
  bool grows = false;   // s_{n+1} = s_n + 1
};

inline EmbedInfo embed_info(const FiniteFlag& f, const GeneralizedFlagSpec& s) {
  Label a = s.coloring.label(f.level + 1);
  auto it = std::lower_bound(f.labels.begin(), f.labels.end(), a);
  return {static_cast<size_t>(it - f.labels.begin()) + 1, it == f.labels.end() || *it != a};
}

/// ι_n: the level-(n+1) truncation determined by f and the reference coloring.
inline FiniteFlag embed_step(const FiniteFlag& f, const GeneralizedFlagSpec& s) {
  Frame fr = frame_of(s);
  if (f.level < fr.n_spec()) fail(ErrorCode::LevelTooSmall, "embedding needs level >= n_spec");
  check_type(f, fr);
  FiniteFlag g = insert_slot(f, f.level + 1, s.coloring.label(f.level + 1));
  g.level = f.level + 1;
  return g;
}

/// The flag with the tail of s whose level-n truncation is f.
inline GeneralizedFlagSpec lift(const FiniteFlag& f, const GeneralizedFlagSpec& s) {
  Frame fr = frame_of(s);
  check_type(f, fr);
  for (const auto& step : f.steps)
    for (const auto& v : step)
      if (!supported_in(v, f.level, Layout::Linear)) fail(ErrorCode::TypeMismatch, "step escapes V_n");
  std::vector<std::vector<Slot>> slots;
  for (const auto& [lab, sl] : fr.classes(f.level)) slots.push_back(sl);
  return canonical(GeneralizedFlagSpec{basis_from_steps(f.steps, slots), s.coloring});
}

/// Identity outside V_window (slots of the layout); `block` acts on window slots.
struct GroupElement {
  Layout layout = Layout::Linear;
  int64_t window = 0;
  MatrixQ block;

  std::vector<Slot> slots() const { return window_slots(window, layout); }
  VectorFS apply(const VectorFS& v) const { return apply_block(block, slots(), v); }
};

inline std::vector<std::vector<VectorFS>> image_steps(const GroupElement& g, const FiniteFlag& f) {
  std::vector<std::vector<VectorFS>> out;
  for (const auto& step : f.steps) {
    std::vector<VectorFS> img;
    for (const auto& v : step) img.push_back(g.apply(v));
    out.push_back(rref(img));
  }
  return out;
}

/// g(F1 ∩ V_n) = F2 ∩ V_n position by position under φ.
inline bool carries(const GroupElement& g, const FiniteFlag& f1, const FiniteFlag& f2, const CommWitness& phi) {
  if (f1.labels.size() != f2.labels.size()) return false;
  for (size_t k = 0; k < f1.labels.size(); ++k)
    if (phi.map(f1.labels[k]) != f2.labels[k]) return false;
  return image_steps(g, f1) == f2.steps;
}

/// Sends the class-ordered basis of f1 at level n to that of f2 (φ matches
/// classes), then rescales one image vector so that det = 1.
inline GroupElement transport(const Frame& f1, const Frame& f2, const CommWitness& phi, int64_t n) {
  auto c1 = f1.classes(n), c2 = f2.classes(n);
  std::vector<VectorFS> src, dst;
  for (const auto& [lab, sl] : c1) {
    auto it = c2.find(phi.map(lab));
    if (it == c2.end() || it->second.size() != sl.size()) fail(ErrorCode::Incommensurable, "class sizes differ at " + lab.str());
    for (size_t k = 0; k < sl.size(); ++k) {
      src.push_back(f1.basis.vec(sl[k]));
      dst.push_back(f2.basis.vec(it->second[k]));
    }
  }
  auto slots = window_slots(n, f1.layout);
  MatrixQ b1 = column_matrix(src, slots), b2 = column_matrix(dst, slots);
  Scalar d = det(b2) / det(b1);
  if (d != Scalar(1))
    for (size_t r = 0; r < slots.size(); ++r) b2(r, 0) = b2(r, 0) / d;
  return {f1.layout, n, b2 * inverse(b1)};
}

inline GroupElement mapping_element(const GeneralizedFlagSpec& s1, const GeneralizedFlagSpec& s2) {
  auto r = commensurable(s1, s2);
  if (!r) fail(ErrorCode::Incommensurable, r.refusal.detail);
  return transport(frame_of(s1), frame_of(s2), *r.witness, r.witness->level);
}

/// dim of {X in sl_n : X(step) ⊆ step for every step of the truncation}.
inline size_t stabilizer_dim(const GeneralizedFlagSpec& s, int64_t n) {
  FiniteFlag f = truncate(s, n);
  const size_t N = static_cast<size_t>(n);
  std::vector<std::vector<Scalar>> rows;
  for (const auto& step : f.steps) {
    if (step.empty()) continue;
    std::vector<std::vector<Scalar>> m;
    for (const auto& v : step) {
      std::vector<Scalar> r(N);
      for (size_t q = 0; q < N; ++q) r[q] = v[static_cast<Slot>(q + 1)];
      m.push_back(r);
    }
    // w^T X v = 0 for w in the annihilator of the step.
    for (const auto& w : kernel(MatrixQ::from_rows(m)))
      for (const auto& v : step) {
        std::vector<Scalar> r(N * N);
        for (size_t p = 0; p < N; ++p)
          for (size_t q = 0; q < N; ++q) r[p * N + q] = w[p] * v[static_cast<Slot>(q + 1)];
        rows.push_back(r);
      }
  }
  std::vector<Scalar> tr(N * N);
  for (size_t p = 0; p < N; ++p) tr[p * N + p] = Scalar(1);
  rows.push_back(tr);
  return N * N - rank(MatrixQ::from_rows(rows));
}

}  // namespace genflag

#include "genflag/cells.hpp"
