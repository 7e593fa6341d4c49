// Morphism evaluation as a tensor network.
//
// Every wire carries one integer label per leg of its object. Generators either add nodes
// (dense tensors attached to labels), identify labels (evaluation maps plug an argument into
// a hom leg), or just reroute wires. Once the whole term has been walked the network is
// contracted pairwise; labels still on an output wire become the result legs.

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include "lstar/error.hpp"
#include "lstar/tensor.hpp"

namespace lstar {

namespace {

using Op = MorphTerm::Op;
using Labels = std::vector<int>;

struct Wire {
  ObjectTerm obj;
  Labels labels;
};

struct Node {
  Tensor t;
  Labels labels;
};

std::size_t product(const std::vector<std::size_t>& xs) {
  return std::accumulate(xs.begin(), xs.end(), std::size_t{1}, std::multiplies<>());
}

// Walks every assignment of `dims`, keeping one running offset per stride vector.
template <class F>
void odometer(const std::vector<std::size_t>& dims, const std::vector<std::vector<std::size_t>>& strides,
              F&& visit) {
  const std::size_t n = dims.size();
  std::vector<std::size_t> off(strides.size(), 0), idx(n, 0);
  if (std::any_of(dims.begin(), dims.end(), [](std::size_t d) { return d == 0; })) return;
  while (true) {
    visit(off);
    std::size_t p = n;
    while (p > 0) {
      --p;
      if (++idx[p] < dims[p]) {
        for (std::size_t s = 0; s < strides.size(); ++s) off[s] += strides[s][p];
        break;
      }
      for (std::size_t s = 0; s < strides.size(); ++s) off[s] -= strides[s][p] * (dims[p] - 1);
      idx[p] = 0;
      if (p == 0) return;
    }
    if (n == 0) return;
  }
}

// Row-major stride of each position, summed per distinct label in `over`.
std::vector<std::size_t> label_strides(const Labels& labels, const std::vector<std::size_t>& shape,
                                       const Labels& over) {
  std::vector<std::size_t> pos(labels.size());
  std::size_t s = 1;
  for (std::size_t i = labels.size(); i-- > 0;) {
    pos[i] = s;
    s *= shape[i];
  }
  std::vector<std::size_t> out(over.size(), 0);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    auto it = std::find(over.begin(), over.end(), labels[i]);
    if (it != over.end()) out[static_cast<std::size_t>(it - over.begin())] += pos[i];
  }
  return out;
}

Labels unique_labels(const Labels& ls) {
  Labels out;
  for (int l : ls)
    if (std::find(out.begin(), out.end(), l) == out.end()) out.push_back(l);
  return out;
}

class Network {
 public:
  Network(const CopyMode& mode, const SpaceAssignment& spaces) : mode_(mode), spaces_(spaces) {}

  int fresh(std::size_t d) {
    parent_.push_back(static_cast<int>(parent_.size()));
    dim_.push_back(d);
    return parent_.back();
  }

  int find(int x) {
    while (parent_[static_cast<std::size_t>(x)] != x) {
      parent_[static_cast<std::size_t>(x)] = parent_[static_cast<std::size_t>(parent_[static_cast<std::size_t>(x)])];
      x = parent_[static_cast<std::size_t>(x)];
    }
    return x;
  }

  void unify(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (dim_[static_cast<std::size_t>(a)] != dim_[static_cast<std::size_t>(b)])
      throw EvalError("joining legs of dimension " + std::to_string(dim_[static_cast<std::size_t>(a)]) +
                      " and " + std::to_string(dim_[static_cast<std::size_t>(b)]));
    parent_[static_cast<std::size_t>(b)] = a;
  }

  std::size_t dim(int l) { return dim_[static_cast<std::size_t>(find(l))]; }

  std::vector<std::size_t> legs(const ObjectTerm& o) const { return spaces_.legs(o, mode_); }

  Wire fresh_wire(const ObjectTerm& o) {
    Wire w{o, {}};
    for (auto d : legs(o)) w.labels.push_back(fresh(d));
    return w;
  }

  void add_node(Tensor t, Labels labels) {
    if (t.rank() != labels.size()) throw EvalError("internal: node rank mismatch");
    for (std::size_t i = 0; i < labels.size(); ++i)
      if (t.shape()[i] != dim(labels[i])) throw EvalError("internal: node leg dimension mismatch");
    nodes_.push_back({std::move(t), std::move(labels)});
  }

  // Splits concatenated labels into one wire per factor of `o`.
  std::vector<Wire> split(const ObjectTerm& o, const Labels& labels) {
    std::vector<Wire> out;
    std::size_t at = 0;
    for (const auto& f : o.factors()) {
      std::size_t n = legs(f).size();
      out.push_back({f, Labels(labels.begin() + static_cast<std::ptrdiff_t>(at),
                               labels.begin() + static_cast<std::ptrdiff_t>(at + n))});
      at += n;
    }
    if (at != labels.size()) throw EvalError("internal: leg count mismatch while splitting " + o.text());
    return out;
  }

  static Labels concat(const std::vector<Wire>& ws) {
    Labels out;
    for (const auto& w : ws) out.insert(out.end(), w.labels.begin(), w.labels.end());
    return out;
  }

  std::vector<Wire> run(const MorphTerm& t, std::vector<Wire> in);

  Tensor finish(const std::vector<Wire>& out);

 private:
  std::vector<Wire> copy(const ObjectTerm& a, const Wire& w);
  Tensor contract(std::vector<Node> nodes, const Labels& out);

  const CopyMode& mode_;
  const SpaceAssignment& spaces_;
  std::vector<int> parent_;
  std::vector<std::size_t> dim_;
  std::vector<Node> nodes_;
  std::set<int> retired_;  // labels swallowed by a full copy
};

std::vector<Wire> Network::run(const MorphTerm& t, std::vector<Wire> in) {
  const auto& o = t.objects();
  auto fock_reject = [&]() {
    if (!mode_.identity_comonad())
      throw EvalError(op_name(t.op()) + " has no Fock space action (derivations using !R are not supported in this mode)");
  };
  switch (t.op()) {
    case Op::Id: return in;

    case Op::Compose: return run(t.arg(0), run(t.arg(1), std::move(in)));

    case Op::Par: {
      std::size_t split_at = typecheck(t.arg(0)).first.factors().size();
      std::vector<Wire> a(in.begin(), in.begin() + static_cast<std::ptrdiff_t>(split_at));
      std::vector<Wire> b(in.begin() + static_cast<std::ptrdiff_t>(split_at), in.end());
      auto ra = run(t.arg(0), std::move(a));
      auto rb = run(t.arg(1), std::move(b));
      ra.insert(ra.end(), rb.begin(), rb.end());
      return ra;
    }

    case Op::EvR: {
      // A * (A => B): plug the A legs into the front of the hom
      std::size_t na = o[0].factors().size();
      Labels arg = concat(std::vector<Wire>(in.begin(), in.begin() + static_cast<std::ptrdiff_t>(na)));
      const Labels& hom = in[na].labels;
      for (std::size_t i = 0; i < arg.size(); ++i) unify(arg[i], hom[i]);
      return split(o[1], Labels(hom.begin() + static_cast<std::ptrdiff_t>(arg.size()), hom.end()));
    }

    case Op::EvL: {
      // (A <= B) * B: plug the B legs into the back of the hom
      const Labels& hom = in[0].labels;
      Labels arg = concat(std::vector<Wire>(in.begin() + 1, in.end()));
      std::size_t front = hom.size() - arg.size();
      for (std::size_t i = 0; i < arg.size(); ++i) unify(arg[i], hom[front + i]);
      return split(o[0], Labels(hom.begin(), hom.begin() + static_cast<std::ptrdiff_t>(front)));
    }

    case Op::CurryL:
    case Op::CurryR: {
      std::vector<Wire> bound;
      for (const auto& f : o[0].factors()) bound.push_back(fresh_wire(f));
      std::vector<Wire> inner;
      if (t.is(Op::CurryL)) {
        inner = bound;
        inner.insert(inner.end(), in.begin(), in.end());
      } else {
        inner = in;
        inner.insert(inner.end(), bound.begin(), bound.end());
      }
      Labels body = concat(run(t.arg(0), std::move(inner)));
      Labels a = concat(bound);
      ObjectTerm cod = typecheck(t).second;
      Labels hom;
      if (t.is(Op::CurryL)) {
        hom = a;
        hom.insert(hom.end(), body.begin(), body.end());
      } else {
        hom = body;
        hom.insert(hom.end(), a.begin(), a.end());
      }
      return {{cod, hom}};
    }

    case Op::CopyDelta: return copy(o[0], in[0]);

    case Op::CounitE: {
      const Wire& w = in[0];
      std::vector<std::size_t> shape;
      for (int l : w.labels) shape.push_back(dim(l));
      Tensor e(shape, 0.0);
      if (mode_.identity_comonad())
        std::fill(e.data().begin(), e.data().end(), 1.0);
      else
        e[0] = 1.0;
      add_node(std::move(e), w.labels);
      return {};
    }

    case Op::Epsilon: {
      if (mode_.identity_comonad()) return {{o[0], in[0].labels}};
      // degree-1 layer of the Fock leg, reshaped onto the body legs
      Wire out = fresh_wire(o[0]);
      std::vector<std::size_t> shape{dim(in[0].labels[0])};
      for (int l : out.labels) shape.push_back(dim(l));
      Tensor p(shape, 0.0);
      std::size_t n = product(std::vector<std::size_t>(shape.begin() + 1, shape.end()));
      for (std::size_t x = 0; x < n; ++x) p[(std::size_t{1} << x) * n + x] = 1.0;
      Labels ls{in[0].labels[0]};
      ls.insert(ls.end(), out.labels.begin(), out.labels.end());
      add_node(std::move(p), ls);
      return {out};
    }

    case Op::DeltaComonad:
      fock_reject();
      return {{ObjectTerm::bang(ObjectTerm::bang(o[0])), in[0].labels}};

    case Op::LaxM: {
      fock_reject();
      std::vector<ObjectTerm> inner;
      for (const auto& a : o) inner.push_back(ObjectTerm::bang(a));
      return {{ObjectTerm::bang(ObjectTerm::tensor(inner)), concat(in)}};
    }

    case Op::BangF: {
      fock_reject();
      ObjectTerm body_dom = typecheck(t.arg(0)).first;
      auto out = run(t.arg(0), split(body_dom, in[0].labels));
      return {{typecheck(t).second, concat(out)}};
    }

    case Op::SwapR:
    case Op::SwapL: {
      // SwapR: A * !B -> !B * A, SwapL: !A * B -> B * !A; A or B may span several wires
      std::vector<Wire> out;
      if (t.is(Op::SwapR)) {
        out.push_back(in.back());
        out.insert(out.end(), in.begin(), in.end() - 1);
      } else {
        out.insert(out.end(), in.begin() + 1, in.end());
        out.push_back(in.front());
      }
      return out;
    }
  }
  throw EvalError("unknown generator");
}

std::vector<Wire> Network::copy(const ObjectTerm& a, const Wire& w) {
  ObjectTerm ba = ObjectTerm::bang(a);
  switch (mode_.kind) {
    case CopyMode::Kind::Cogebra:
    case CopyMode::Kind::FockGrouplike:
      // grouplike on the basis: both copies share the input's index
      return {{ba, w.labels}, {ba, w.labels}};

    case CopyMode::Kind::CofreeK: {
      Wire w1 = fresh_wire(ba), w2 = fresh_wire(ba);
      std::vector<std::size_t> shape;
      for (int l : w.labels) shape.push_back(dim(l));
      std::size_t n = product(shape);
      std::vector<std::size_t> full = shape;
      full.insert(full.end(), shape.begin(), shape.end());
      full.insert(full.end(), shape.begin(), shape.end());
      Tensor d(full, 0.0);
      for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = 0; y < n; ++y) {
          d[(x * n + x) * n + y] += mode_.k;
          d[(x * n + y) * n + x] += mode_.k;
        }
      Labels ls = w.labels;
      ls.insert(ls.end(), w1.labels.begin(), w1.labels.end());
      ls.insert(ls.end(), w2.labels.begin(), w2.labels.end());
      add_node(std::move(d), ls);
      return {w1, w2};
    }

    case CopyMode::Kind::Full: {
      // v -> v (x) v needs v itself: the copied wire must be the only open end of a
      // closed sub-network
      std::vector<int> roots;
      for (int l : w.labels) roots.push_back(find(l));
      std::set<int> frontier(roots.begin(), roots.end()), seen_labels = frontier;
      std::vector<bool> in_comp(nodes_.size(), false);
      bool grew = true;
      while (grew) {
        grew = false;
        for (std::size_t i = 0; i < nodes_.size(); ++i) {
          if (in_comp[i]) continue;
          bool touches = false;
          for (int l : nodes_[i].labels)
            if (seen_labels.count(find(l))) touches = true;
          if (!touches) continue;
          in_comp[i] = true;
          grew = true;
          for (int l : nodes_[i].labels) seen_labels.insert(find(l));
        }
      }
      std::map<int, std::size_t> endpoints;
      for (const auto& nd : nodes_)
        for (int l : nd.labels) ++endpoints[find(l)];
      for (int l : seen_labels) {
        bool on_wire = std::find(roots.begin(), roots.end(), l) != roots.end();
        std::size_t e = endpoints[l];
        if (on_wire ? e != 1 : e < 2)
          throw EvalError("full copying needs a concrete argument, but the copied " + a.text() +
                          " wire depends on an open input");
      }
      if (unique_labels(roots).size() != roots.size())
        throw EvalError("full copying of a wire with tied legs");
      std::vector<Node> comp, rest;
      for (std::size_t i = 0; i < nodes_.size(); ++i) (in_comp[i] ? comp : rest).push_back(nodes_[i]);
      Tensor v = contract(std::move(comp), roots);
      nodes_ = std::move(rest);
      retired_.insert(seen_labels.begin(), seen_labels.end());
      Wire w1 = fresh_wire(ba), w2 = fresh_wire(ba);
      add_node(v, w1.labels);
      add_node(v, w2.labels);
      return {w1, w2};
    }
  }
  return {};
}

// Contracts `nodes` down to a tensor over `out` (labels are resolved to roots first).
Tensor Network::contract(std::vector<Node> nodes, const Labels& out_raw) {
  Labels out;
  for (int l : out_raw) out.push_back(find(l));
  for (auto& nd : nodes)
    for (int& l : nd.labels) l = find(l);

  auto dims_of = [&](const Labels& ls) {
    std::vector<std::size_t> d;
    for (int l : ls) d.push_back(dim(l));
    return d;
  };

  // tied legs inside one node become a diagonal
  for (auto& nd : nodes) {
    Labels u = unique_labels(nd.labels);
    if (u.size() == nd.labels.size()) continue;
    auto ud = dims_of(u);
    Tensor r(ud);
    auto src = label_strides(nd.labels, nd.t.shape(), u);
    auto dst = label_strides(u, ud, u);
    odometer(ud, {src, dst}, [&](const std::vector<std::size_t>& off) { r[off[1]] = nd.t[off[0]]; });
    nd = {std::move(r), u};
  }

  auto pair_contract = [&](const Node& a, const Node& b, const Labels& keep) {
    Labels all = unique_labels([&] {
      Labels x = a.labels;
      x.insert(x.end(), b.labels.begin(), b.labels.end());
      return x;
    }());
    auto ad = dims_of(all);
    auto kd = dims_of(keep);
    Tensor r(kd);
    auto sa = label_strides(a.labels, a.t.shape(), all);
    auto sb = label_strides(b.labels, b.t.shape(), all);
    auto sr = label_strides(keep, kd, all);
    odometer(ad, {sa, sb, sr},
             [&](const std::vector<std::size_t>& off) { r[off[2]] += a.t[off[0]] * b.t[off[1]]; });
    return Node{std::move(r), keep};
  };

  auto needed_elsewhere = [&](int l, std::size_t skip1, std::size_t skip2) {
    if (std::find(out.begin(), out.end(), l) != out.end()) return true;
    for (std::size_t k = 0; k < nodes.size(); ++k) {
      if (k == skip1 || k == skip2) continue;
      if (std::find(nodes[k].labels.begin(), nodes[k].labels.end(), l) != nodes[k].labels.end())
        return true;
    }
    return false;
  };

  while (nodes.size() > 1) {
    // cheapest pair that shares a label; outer products only when nothing is shared
    std::size_t bi = 0, bj = 1;
    double best = -1;
    bool best_shared = false;
    for (std::size_t i = 0; i < nodes.size(); ++i)
      for (std::size_t j = i + 1; j < nodes.size(); ++j) {
        Labels u = nodes[i].labels;
        u.insert(u.end(), nodes[j].labels.begin(), nodes[j].labels.end());
        Labels uu = unique_labels(u);
        bool shared = uu.size() < u.size();
        double cost = static_cast<double>(product(dims_of(uu)));
        if (best < 0 || (shared && !best_shared) || (shared == best_shared && cost < best)) {
          best = cost;
          best_shared = shared;
          bi = i;
          bj = j;
        }
      }
    Labels keep;
    for (int l : unique_labels([&] {
           Labels x = nodes[bi].labels;
           x.insert(x.end(), nodes[bj].labels.begin(), nodes[bj].labels.end());
           return x;
         }()))
      if (needed_elsewhere(l, bi, bj)) keep.push_back(l);
    Node merged = pair_contract(nodes[bi], nodes[bj], keep);
    nodes.erase(nodes.begin() + static_cast<std::ptrdiff_t>(bj));
    nodes[bi] = std::move(merged);
  }

  Node last = nodes.empty() ? Node{Tensor::scalar(1.0), {}} : nodes[0];
  // sum away what the output does not mention
  {
    Labels keep;
    for (int l : last.labels)
      if (std::find(out.begin(), out.end(), l) != out.end()) keep.push_back(l);
    if (keep.size() != last.labels.size()) last = pair_contract(last, Node{Tensor::scalar(1.0), {}}, keep);
  }

  // spread onto the output legs; repeated labels give diagonals, absent ones are constant
  Labels u = unique_labels(out);
  auto ud = dims_of(u);
  auto od = dims_of(out);
  Tensor r(od, 0.0);
  auto src = label_strides(last.labels, last.t.shape(), u);
  auto dst = label_strides(out, od, u);
  odometer(ud, {src, dst}, [&](const std::vector<std::size_t>& off) { r[off[1]] = last.t[off[0]]; });
  return r;
}

Tensor Network::finish(const std::vector<Wire>& out) {
  Labels ls = concat(out);
  // closed loops that never touch a node contribute their dimension
  std::set<int> used;
  for (const auto& nd : nodes_)
    for (int l : nd.labels) used.insert(find(l));
  for (int l : ls) used.insert(find(l));
  double loops = 1.0;
  std::set<int> roots;
  for (std::size_t l = 0; l < parent_.size(); ++l) roots.insert(find(static_cast<int>(l)));
  for (int r : roots)
    if (!used.count(r) && !retired_.count(r)) loops *= static_cast<double>(dim(r));
  Tensor t = contract(nodes_, ls);
  if (loops != 1.0) t = loops * t;
  return t;
}

}  // namespace

Tensor eval_morphism(const TypedMorphism& m, const std::vector<Tensor>& inputs, const CopyMode& mode,
                     const SpaceAssignment& spaces) {
  typecheck(m.term);
  Network net(mode, spaces);
  auto factors = m.domain.factors();
  if (inputs.size() != factors.size())
    throw EvalError("expected " + std::to_string(factors.size()) + " inputs, got " +
                    std::to_string(inputs.size()));
  std::vector<Wire> in;
  for (std::size_t i = 0; i < factors.size(); ++i) {
    Wire w = net.fresh_wire(factors[i]);
    std::vector<std::size_t> want = net.legs(factors[i]);
    if (inputs[i].shape() != want) {
      std::string ws, gs;
      for (auto d : want) ws += " " + std::to_string(d);
      for (auto d : inputs[i].shape()) gs += " " + std::to_string(d);
      throw EvalError("input " + std::to_string(i) + " (" + factors[i].text() + ") needs shape [" + ws +
                      " ], got [" + gs + " ]");
    }
    net.add_node(inputs[i], w.labels);
    in.push_back(std::move(w));
  }
  auto out = net.run(m.term, std::move(in));
  return net.finish(out);
}

}  // namespace lstar
