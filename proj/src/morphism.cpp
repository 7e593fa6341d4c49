#include "lstar/morphism.hpp"

#include <algorithm>
#include <optional>
#include <sstream>

#include "lstar/error.hpp"

namespace lstar {

// ---------------------------------------------------------------- objects

ObjectTerm ObjectTerm::make(Kind k, std::string atom, std::vector<ObjectTerm> children) {
  auto n = std::make_shared<Node>();
  n->kind = k;
  n->atom = std::move(atom);
  n->children = std::move(children);
  switch (k) {
    case Kind::Unit: n->text = "I"; break;
    case Kind::Base: n->text = n->atom; break;
    case Kind::Tensor: {
      n->text = "(";
      for (std::size_t i = 0; i < n->children.size(); ++i) {
        if (i) n->text += " * ";
        n->text += n->children[i].text();
      }
      n->text += ")";
      break;
    }
    case Kind::HomR:
      n->text = "(" + n->children[0].text() + " => " + n->children[1].text() + ")";
      break;
    case Kind::HomL:
      n->text = "(" + n->children[0].text() + " <= " + n->children[1].text() + ")";
      break;
    case Kind::Bang: n->text = "!" + n->children[0].text(); break;
  }
  return ObjectTerm(std::move(n));
}

ObjectTerm ObjectTerm::unit() {
  static const ObjectTerm u = make(Kind::Unit, "", {});
  return u;
}

ObjectTerm ObjectTerm::base(std::string atom) { return make(Kind::Base, std::move(atom), {}); }

ObjectTerm ObjectTerm::tensor(const std::vector<ObjectTerm>& factors) {
  std::vector<ObjectTerm> flat;
  for (const auto& f : factors) {
    auto fs = f.factors();
    flat.insert(flat.end(), fs.begin(), fs.end());
  }
  if (flat.empty()) return unit();
  if (flat.size() == 1) return flat[0];
  return make(Kind::Tensor, "", std::move(flat));
}

ObjectTerm ObjectTerm::hom_r(const ObjectTerm& a, const ObjectTerm& b) {
  return make(Kind::HomR, "", {a, b});
}
ObjectTerm ObjectTerm::hom_l(const ObjectTerm& a, const ObjectTerm& b) {
  return make(Kind::HomL, "", {a, b});
}
ObjectTerm ObjectTerm::bang(const ObjectTerm& body) { return make(Kind::Bang, "", {body}); }

std::vector<ObjectTerm> ObjectTerm::factors() const {
  if (is(Kind::Unit)) return {};
  if (is(Kind::Tensor)) return children();
  return {*this};
}

ObjectTerm interpret_formula(const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::Atom: return ObjectTerm::base(f.name());
    case Formula::Kind::Unit: return ObjectTerm::unit();
    case Formula::Kind::Product:
      return ObjectTerm::tensor({interpret_formula(f.left()), interpret_formula(f.right())});
    case Formula::Kind::Under:
      return ObjectTerm::hom_r(interpret_formula(f.left()), interpret_formula(f.right()));
    case Formula::Kind::Over:
      return ObjectTerm::hom_l(interpret_formula(f.left()), interpret_formula(f.right()));
    case Formula::Kind::Bang: return ObjectTerm::bang(interpret_formula(f.body()));
  }
  return ObjectTerm::unit();
}

ObjectTerm interpret_antecedent(const std::vector<Formula>& antecedent) {
  std::vector<ObjectTerm> parts;
  parts.reserve(antecedent.size());
  for (const auto& f : antecedent) parts.push_back(interpret_formula(f));
  return ObjectTerm::tensor(parts);
}

// ---------------------------------------------------------------- morphisms

MorphTerm MorphTerm::make(Op op, std::vector<ObjectTerm> objects, std::vector<MorphTerm> args) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->objects = std::move(objects);
  n->args = std::move(args);
  return MorphTerm(std::move(n));
}

MorphTerm MorphTerm::id(const ObjectTerm& a) { return make(Op::Id, {a}, {}); }
MorphTerm MorphTerm::compose(const MorphTerm& later, const MorphTerm& earlier) {
  return make(Op::Compose, {}, {later, earlier});
}
MorphTerm MorphTerm::par(const MorphTerm& f, const MorphTerm& g) {
  return make(Op::Par, {}, {f, g});
}
MorphTerm MorphTerm::ev_r(const ObjectTerm& a, const ObjectTerm& b) {
  return make(Op::EvR, {a, b}, {});
}
MorphTerm MorphTerm::ev_l(const ObjectTerm& a, const ObjectTerm& b) {
  return make(Op::EvL, {a, b}, {});
}
MorphTerm MorphTerm::curry_l(const ObjectTerm& a, const MorphTerm& f) {
  return make(Op::CurryL, {a}, {f});
}
MorphTerm MorphTerm::curry_r(const ObjectTerm& a, const MorphTerm& f) {
  return make(Op::CurryR, {a}, {f});
}
MorphTerm MorphTerm::copy_delta(const ObjectTerm& a) { return make(Op::CopyDelta, {a}, {}); }
MorphTerm MorphTerm::counit_e(const ObjectTerm& a) { return make(Op::CounitE, {a}, {}); }
MorphTerm MorphTerm::epsilon(const ObjectTerm& a) { return make(Op::Epsilon, {a}, {}); }
MorphTerm MorphTerm::delta_comonad(const ObjectTerm& a) {
  return make(Op::DeltaComonad, {a}, {});
}
MorphTerm MorphTerm::lax_m(const std::vector<ObjectTerm>& as) { return make(Op::LaxM, as, {}); }
MorphTerm MorphTerm::bang_f(const MorphTerm& f) { return make(Op::BangF, {}, {f}); }
MorphTerm MorphTerm::swap_r(const ObjectTerm& a, const ObjectTerm& b) {
  return make(Op::SwapR, {a, b}, {});
}
MorphTerm MorphTerm::swap_l(const ObjectTerm& a, const ObjectTerm& b) {
  return make(Op::SwapL, {a, b}, {});
}

bool MorphTerm::operator==(const MorphTerm& o) const {
  if (node_ == o.node_) return true;
  if (op() != o.op() || objects() != o.objects() || args().size() != o.args().size())
    return false;
  for (std::size_t i = 0; i < args().size(); ++i)
    if (!(args()[i] == o.args()[i])) return false;
  return true;
}

std::string op_name(MorphTerm::Op op) {
  using Op = MorphTerm::Op;
  switch (op) {
    case Op::Id: return "Id";
    case Op::Compose: return "Compose";
    case Op::Par: return "Par";
    case Op::EvR: return "EvR";
    case Op::EvL: return "EvL";
    case Op::CurryL: return "CurryL";
    case Op::CurryR: return "CurryR";
    case Op::CopyDelta: return "CopyDelta";
    case Op::CounitE: return "CounitE";
    case Op::Epsilon: return "Epsilon";
    case Op::DeltaComonad: return "DeltaComonad";
    case Op::LaxM: return "LaxM";
    case Op::BangF: return "BangF";
    case Op::SwapR: return "SwapR";
    case Op::SwapL: return "SwapL";
  }
  return "?";
}

// ---------------------------------------------------------------- typing

namespace {

using Op = MorphTerm::Op;
using Objs = std::vector<ObjectTerm>;

std::pair<ObjectTerm, ObjectTerm> type_rec(const MorphTerm& t, const std::string& path) {
  auto fail = [&](const std::string& msg) -> TypeError {
    return TypeError(op_name(t.op()) + " at " + path + ": " + msg);
  };
  const auto& o = t.objects();
  auto bang = [](const ObjectTerm& x) { return ObjectTerm::bang(x); };
  auto T = [](Objs xs) { return ObjectTerm::tensor(xs); };

  switch (t.op()) {
    case Op::Id: return {o.at(0), o.at(0)};
    case Op::Compose: {
      auto later = type_rec(t.arg(0), path + "/0");
      auto earlier = type_rec(t.arg(1), path + "/1");
      if (earlier.second != later.first)
        throw fail("codomain " + earlier.second.text() + " of the earlier morphism does not match domain " +
                   later.first.text() + " of the later one");
      return {earlier.first, later.second};
    }
    case Op::Par: {
      auto f = type_rec(t.arg(0), path + "/0");
      auto g = type_rec(t.arg(1), path + "/1");
      return {T({f.first, g.first}), T({f.second, g.second})};
    }
    case Op::EvR: return {T({o[0], ObjectTerm::hom_r(o[0], o[1])}), o[1]};
    case Op::EvL: return {T({ObjectTerm::hom_l(o[0], o[1]), o[1]}), o[0]};
    case Op::CurryL: {
      auto f = type_rec(t.arg(0), path + "/0");
      Objs a = o[0].factors(), dom = f.first.factors();
      if (dom.size() < a.size() || !std::equal(a.begin(), a.end(), dom.begin()))
        throw fail("domain " + f.first.text() + " does not start with " + o[0].text());
      return {T(Objs(dom.begin() + static_cast<std::ptrdiff_t>(a.size()), dom.end())),
              ObjectTerm::hom_r(o[0], f.second)};
    }
    case Op::CurryR: {
      auto f = type_rec(t.arg(0), path + "/0");
      Objs a = o[0].factors(), dom = f.first.factors();
      if (dom.size() < a.size() || !std::equal(a.begin(), a.end(), dom.end() - static_cast<std::ptrdiff_t>(a.size())))
        throw fail("domain " + f.first.text() + " does not end with " + o[0].text());
      return {T(Objs(dom.begin(), dom.end() - static_cast<std::ptrdiff_t>(a.size()))),
              ObjectTerm::hom_l(f.second, o[0])};
    }
    case Op::CopyDelta: return {bang(o[0]), T({bang(o[0]), bang(o[0])})};
    case Op::CounitE: return {bang(o[0]), ObjectTerm::unit()};
    case Op::Epsilon: return {bang(o[0]), o[0]};
    case Op::DeltaComonad: return {bang(o[0]), bang(bang(o[0]))};
    case Op::LaxM: {
      Objs dom, inner;
      for (const auto& a : o) {
        dom.push_back(bang(bang(a)));
        inner.push_back(bang(a));
      }
      return {T(dom), bang(T(inner))};
    }
    case Op::BangF: {
      auto f = type_rec(t.arg(0), path + "/0");
      return {bang(f.first), bang(f.second)};
    }
    case Op::SwapR: return {T({o[0], bang(o[1])}), T({bang(o[1]), o[0]})};
    case Op::SwapL: return {T({bang(o[0]), o[1]}), T({o[1], bang(o[0])})};
  }
  throw fail("unknown generator");
}

// ---------------------------------------------------------------- compilation

// id_{before} (x) m (x) id_{after}, leaving out empty identities.
MorphTerm around(const Objs& before, const MorphTerm& m, const Objs& after) {
  MorphTerm out = m;
  ObjectTerm b = ObjectTerm::tensor(before), a = ObjectTerm::tensor(after);
  if (!b.is(ObjectTerm::Kind::Unit)) out = MorphTerm::par(MorphTerm::id(b), out);
  if (!a.is(ObjectTerm::Kind::Unit)) out = MorphTerm::par(out, MorphTerm::id(a));
  return out;
}

Objs interp(const std::vector<Formula>& fs, std::size_t from, std::size_t to) {
  Objs out;
  for (std::size_t i = from; i < to; ++i) out.push_back(interpret_formula(fs[i]));
  return out;
}

MorphTerm compile_rec(const Derivation& d) {
  const auto& ant = d.conclusion.antecedent;
  const std::size_t n = ant.size();
  const std::size_t i = d.data.index;
  const std::size_t k = d.data.span;

  switch (d.rule) {
    case Rule::Axiom: return MorphTerm::id(interpret_formula(d.conclusion.succedent));

    case Rule::UnderL: {
      // Δ1, Γ, A\B, Δ2 with Γ = ant[i-k, i)
      MorphTerm f = compile_rec(d.premises[0]);
      MorphTerm g = compile_rec(d.premises[1]);
      const Formula& p = ant[i];
      ObjectTerm a = interpret_formula(p.left()), b = interpret_formula(p.right());
      Objs d1 = interp(ant, 0, i - k), d2 = interp(ant, i + 1, n);
      Objs rest = d2;
      rest.insert(rest.begin(), interpret_formula(p));
      MorphTerm step1 = around(d1, f, rest);
      MorphTerm step2 = around(d1, MorphTerm::ev_r(a, b), d2);
      return MorphTerm::compose(g, MorphTerm::compose(step2, step1));
    }

    case Rule::OverL: {
      // Δ1, B/A, Γ, Δ2 with Γ = ant[i+1, i+1+k)
      MorphTerm f = compile_rec(d.premises[0]);
      MorphTerm g = compile_rec(d.premises[1]);
      const Formula& p = ant[i];
      ObjectTerm b = interpret_formula(p.left()), a = interpret_formula(p.right());
      Objs d1 = interp(ant, 0, i + 1), d2 = interp(ant, i + 1 + k, n);
      Objs d1_only = interp(ant, 0, i);
      MorphTerm step1 = around(d1, f, d2);
      MorphTerm step2 = around(d1_only, MorphTerm::ev_l(b, a), d2);
      return MorphTerm::compose(g, MorphTerm::compose(step2, step1));
    }

    case Rule::UnderR:
      return MorphTerm::curry_l(interpret_formula(d.conclusion.succedent.left()),
                                compile_rec(d.premises[0]));

    case Rule::OverR:
      return MorphTerm::curry_r(interpret_formula(d.conclusion.succedent.right()),
                                compile_rec(d.premises[0]));

    case Rule::Contr: {
      MorphTerm f = compile_rec(d.premises[0]);
      return MorphTerm::compose(
          f, around(interp(ant, 0, i), MorphTerm::copy_delta(interpret_formula(ant[i].body())),
                    interp(ant, i + 1, n)));
    }

    case Rule::BangL: {
      MorphTerm f = compile_rec(d.premises[0]);
      return MorphTerm::compose(
          f, around(interp(ant, 0, i), MorphTerm::epsilon(interpret_formula(ant[i].body())),
                    interp(ant, i + 1, n)));
    }

    case Rule::BangR: {
      MorphTerm f = compile_rec(d.premises[0]);
      Objs bodies;
      for (const auto& a : ant) bodies.push_back(interpret_formula(a.body()));
      MorphTerm deltas = MorphTerm::id(ObjectTerm::unit());
      for (std::size_t j = 0; j < bodies.size(); ++j) {
        MorphTerm dj = MorphTerm::delta_comonad(bodies[j]);
        deltas = j == 0 ? dj : MorphTerm::par(deltas, dj);
      }
      return MorphTerm::compose(MorphTerm::bang_f(f),
                                MorphTerm::compose(MorphTerm::lax_m(bodies), deltas));
    }

    case Rule::Perm1: {
      // conclusion Δ1, Γ, !A, Δ2 -> premise Δ1, !A, Γ, Δ2; !A walks left over Γ = ant[i-k, i)
      MorphTerm f = compile_rec(d.premises[0]);
      ObjectTerm a = interpret_formula(ant[i].body());
      Objs gamma = interp(ant, i - k, i);
      std::optional<MorphTerm> sigma;
      for (std::size_t step = 0; step < k; ++step) {
        std::size_t g = k - 1 - step;  // Γ_g is immediately left of !A
        Objs before(gamma.begin(), gamma.begin() + static_cast<std::ptrdiff_t>(g));
        Objs after(gamma.begin() + static_cast<std::ptrdiff_t>(g) + 1, gamma.end());
        MorphTerm s = around(before, MorphTerm::swap_r(gamma[g], a), after);
        sigma = sigma ? MorphTerm::compose(s, *sigma) : s;
      }
      return MorphTerm::compose(f, around(interp(ant, 0, i - k), *sigma, interp(ant, i + 1, n)));
    }

    case Rule::Perm2: {
      // conclusion Δ1, !A, Γ, Δ2 -> premise Δ1, Γ, !A, Δ2; !A walks right over Γ = ant(i, i+k]
      MorphTerm f = compile_rec(d.premises[0]);
      ObjectTerm a = interpret_formula(ant[i].body());
      Objs gamma = interp(ant, i + 1, i + 1 + k);
      std::optional<MorphTerm> sigma;
      for (std::size_t g = 0; g < k; ++g) {
        Objs before(gamma.begin(), gamma.begin() + static_cast<std::ptrdiff_t>(g));
        Objs after(gamma.begin() + static_cast<std::ptrdiff_t>(g) + 1, gamma.end());
        MorphTerm s = around(before, MorphTerm::swap_l(a, gamma[g]), after);
        sigma = sigma ? MorphTerm::compose(s, *sigma) : s;
      }
      return MorphTerm::compose(f, around(interp(ant, 0, i), *sigma, interp(ant, i + 1 + k, n)));
    }
  }
  throw TypeError("unknown rule");
}

}  // namespace

std::pair<ObjectTerm, ObjectTerm> typecheck(const MorphTerm& t) { return type_rec(t, "root"); }

TypedMorphism compile(const Derivation& d) {
  CheckResult ok = check(d);
  if (!ok) throw TypeError("cannot compile an ill-formed derivation: " + ok.message);
  MorphTerm t = compile_rec(d);
  auto [dom, cod] = typecheck(t);
  ObjectTerm want_dom = interpret_antecedent(d.conclusion.antecedent);
  ObjectTerm want_cod = interpret_formula(d.conclusion.succedent);
  if (dom != want_dom || cod != want_cod)
    throw TypeError("compiled term has type " + dom.text() + " -> " + cod.text() + ", expected " +
                    want_dom.text() + " -> " + want_cod.text());
  return {t, dom, cod};
}

// ---------------------------------------------------------------- simplify

MorphTerm simplify(const MorphTerm& t) {
  auto is_id = [](const MorphTerm& m) { return m.is(Op::Id); };
  auto is_unit_id = [](const MorphTerm& m) {
    return m.is(Op::Id) && m.object(0).is(ObjectTerm::Kind::Unit);
  };
  switch (t.op()) {
    case Op::Compose: {
      MorphTerm a = simplify(t.arg(0)), b = simplify(t.arg(1));
      if (is_id(a)) return b;
      if (is_id(b)) return a;
      return MorphTerm::compose(a, b);
    }
    case Op::Par: {
      MorphTerm a = simplify(t.arg(0)), b = simplify(t.arg(1));
      if (is_unit_id(a)) return b;
      if (is_unit_id(b)) return a;
      if (is_id(a) && is_id(b)) return MorphTerm::id(ObjectTerm::tensor({a.object(0), b.object(0)}));
      return MorphTerm::par(a, b);
    }
    case Op::CurryL: return MorphTerm::curry_l(t.object(0), simplify(t.arg(0)));
    case Op::CurryR: return MorphTerm::curry_r(t.object(0), simplify(t.arg(0)));
    case Op::BangF: {
      MorphTerm a = simplify(t.arg(0));
      if (is_id(a)) return MorphTerm::id(ObjectTerm::bang(a.object(0)));
      return MorphTerm::bang_f(a);
    }
    default: return t;
  }
}

// ---------------------------------------------------------------- counting

std::size_t count_op(const MorphTerm& t, MorphTerm::Op op) {
  std::size_t c = t.is(op) ? 1 : 0;
  for (const auto& a : t.args()) c += count_op(a, op);
  return c;
}

namespace {

// 0: no swap inside but swap-only, 1: swap-only with a swap, 2: mixed
int swap_class(const MorphTerm& t) {
  switch (t.op()) {
    case Op::Id: return 0;
    case Op::SwapR:
    case Op::SwapL: return 1;
    case Op::Compose:
    case Op::Par: {
      int a = swap_class(t.arg(0)), b = swap_class(t.arg(1));
      if (a == 2 || b == 2) return 2;
      return std::max(a, b);
    }
    default: return 2;
  }
}

std::size_t count_composites(const MorphTerm& t) {
  int c = swap_class(t);
  if (c == 1) return 1;
  if (c == 0) return 0;
  std::size_t total = 0;
  for (const auto& a : t.args()) total += count_composites(a);
  return total;
}

}  // namespace

std::size_t count_swap_composites(const MorphTerm& t) { return count_composites(t); }

// ---------------------------------------------------------------- JSON

nlohmann::json to_json(const MorphTerm& t) {
  nlohmann::json j;
  j["op"] = op_name(t.op());
  if (!t.objects().empty()) {
    auto objs = nlohmann::json::array();
    for (const auto& o : t.objects()) objs.push_back(o.text());
    j["objects"] = objs;
  }
  if (!t.args().empty()) {
    auto args = nlohmann::json::array();
    for (const auto& a : t.args()) args.push_back(to_json(a));
    j["args"] = args;
  }
  return j;
}

nlohmann::json to_json(const TypedMorphism& m) {
  nlohmann::json j;
  j["domain"] = m.domain.text();
  j["codomain"] = m.codomain.text();
  j["term"] = to_json(m.term);
  return j;
}

// ---------------------------------------------------------------- DOT

namespace {

std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '\\' || c == '"') out += '\\';
    out += c;
  }
  return out;
}

void derivation_nodes(const Derivation& d, std::size_t& next, std::ostringstream& os) {
  std::size_t me = next++;
  os << "  n" << me << " [label=\"" << dot_escape(d.conclusion.text()) << "\\n(" << rule_name(d.rule)
     << ")\"];\n";
  for (const auto& p : d.premises) {
    std::size_t child = next;
    derivation_nodes(p, next, os);
    os << "  n" << child << " -> n" << me << ";\n";
  }
}

struct Port {
  std::string node;
  ObjectTerm wire;
};

class Wiring {
 public:
  std::ostringstream nodes, edges;

  std::string node(const std::string& label, const std::string& attrs) {
    std::string id = "g" + std::to_string(next_++);
    nodes << "  " << id << " [label=\"" << dot_escape(label) << "\"" << (attrs.empty() ? "" : ", ")
          << attrs << "];\n";
    return id;
  }

  void edge(const Port& from, const std::string& to) {
    edges << "  " << from.node << " -> " << to << " [label=\"" << dot_escape(from.wire.text())
          << "\"];\n";
  }

  // A generator node consuming `in` and producing one wire per factor of `cod`.
  std::vector<Port> gen(const std::string& label, const std::string& attrs,
                        const std::vector<Port>& in, const ObjectTerm& cod) {
    std::string id = node(label, attrs);
    for (const auto& p : in) edge(p, id);
    std::vector<Port> out;
    for (const auto& f : cod.factors()) out.push_back({id, f});
    return out;
  }

  std::vector<Port> run(const MorphTerm& t, const std::vector<Port>& in) {
    ObjectTerm cod = typecheck(t).second;
    switch (t.op()) {
      case Op::Id: return in;
      case Op::Compose: return run(t.arg(0), run(t.arg(1), in));
      case Op::Par: {
        std::size_t split = typecheck(t.arg(0)).first.factors().size();
        std::vector<Port> a(in.begin(), in.begin() + static_cast<std::ptrdiff_t>(split));
        std::vector<Port> b(in.begin() + static_cast<std::ptrdiff_t>(split), in.end());
        auto ra = run(t.arg(0), a);
        auto rb = run(t.arg(1), b);
        ra.insert(ra.end(), rb.begin(), rb.end());
        return ra;
      }
      case Op::CurryL:
      case Op::CurryR: {
        bool left = t.is(Op::CurryL);
        std::string clasp = node(left ? "Λl" : "Λr", "shape=box");
        std::vector<Port> inner;
        std::vector<Port> bound;
        for (const auto& f : t.object(0).factors()) bound.push_back({clasp, f});
        if (left) {
          inner = bound;
          inner.insert(inner.end(), in.begin(), in.end());
        } else {
          inner = in;
          inner.insert(inner.end(), bound.begin(), bound.end());
        }
        for (const auto& p : run(t.arg(0), inner)) edge(p, clasp);
        return {{clasp, cod}};
      }
      case Op::BangF: {
        // the body is drawn inside the functor box
        std::string box = node("!", "shape=box, style=rounded");
        for (const auto& p : in) edge(p, box);
        std::vector<Port> inner;
        for (const auto& f : typecheck(t.arg(0)).first.factors()) inner.push_back({box, f});
        for (const auto& p : run(t.arg(0), inner)) edge(p, box);
        return {{box, cod}};
      }
      case Op::CopyDelta: return gen("Δ", "shape=triangle", in, cod);
      case Op::Epsilon:
        return gen("", "shape=circle, style=filled, fillcolor=black, width=0.15", in, cod);
      case Op::DeltaComonad: return gen("δ", "shape=circle", in, cod);
      case Op::CounitE: return gen("e", "shape=circle", in, cod);
      case Op::EvR: return gen("ev r", "shape=invhouse", in, cod);
      case Op::EvL: return gen("ev l", "shape=invhouse", in, cod);
      case Op::LaxM: return gen("m", "shape=box", in, cod);
      case Op::SwapR: return gen("σr", "shape=diamond", in, cod);
      case Op::SwapL: return gen("σl", "shape=diamond", in, cod);
    }
    return in;
  }

 private:
  std::size_t next_ = 0;
};

}  // namespace

std::string export_dot(const Derivation& d) {
  std::ostringstream os;
  os << "digraph derivation {\n  rankdir=BT;\n  node [shape=plaintext, fontname=\"monospace\"];\n";
  std::size_t next = 0;
  derivation_nodes(d, next, os);
  os << "}\n";
  return os.str();
}

std::string export_dot(const TypedMorphism& m) {
  Wiring w;
  std::vector<Port> in;
  for (const auto& f : m.domain.factors()) {
    std::string id = w.node(f.text(), "shape=plaintext");
    in.push_back({id, f});
  }
  auto out = w.run(m.term, in);
  for (const auto& p : out) {
    std::string id = w.node(p.wire.text(), "shape=plaintext");
    w.edge(p, id);
  }
  std::ostringstream os;
  os << "digraph morphism {\n  rankdir=TB;\n";
  os << w.nodes.str() << w.edges.str() << "}\n";
  return os.str();
}

}  // namespace lstar
