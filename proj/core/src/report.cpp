#include "rankone/report.hpp"

namespace rankone {

namespace {

std::vector<std::string> words(std::vector<Word> const& ws,
                               Alphabet const& alphabet) {
  std::vector<std::string> out;
  for (auto const& w : ws) {
    out.push_back(format_word(w, alphabet));
  }
  return out;
}

}  // namespace

json to_json(mpz_class const& n) {
  if (n.fits_slong_p()) {
    return n.get_si();
  }
  return n.get_str();
}

json to_json(Presentation const& p) {
  return {{"generators", p.generators.names()},
          {"relators", words(p.relators, p.generators)},
          {"deficiency", p.deficiency()},
          {"text", format_presentation(p)}};
}

json to_json(CosetTable const& t) {
  json action = json::object();
  for (std::size_t g = 0; g < t.parent.rank(); ++g) {
    std::vector<std::size_t> row;
    for (std::size_t c = 0; c < t.index; ++c) {
      row.push_back(t.act(c, make_letter(g)) + 1);
    }
    action[t.parent.generators.name(g)] = row;
  }
  return {{"index", t.index},
          {"generators", t.parent.generators.names()},
          {"subgroup_generators",
           words(t.subgroup_generators, t.parent.generators)},
          {"action", action}};
}

json to_json(AbelianInvariants const& inv) {
  json torsion = json::array();
  for (auto const& q : inv.torsion) {
    torsion.push_back(to_json(q));
  }
  return {{"betti", inv.betti}, {"torsion", torsion}};
}

json to_json(GolodShafarevichReport const& r) {
  return {{"p", r.p},
          {"d_p", r.d_p},
          {"relator_count_pro_p", r.relator_count_pro_p},
          {"gs_violated", r.violated}};
}

json to_json(HomologyReport const& r) {
  json rows = json::array();
  for (auto const& row : r.per_prime) {
    rows.push_back({{"p", row.p}, {"d_p", row.d_p},
                    {"gs_violated", row.violated}});
  }
  json out = to_json(r.invariants);
  out["deficiency"] = r.deficiency;
  out["per_prime"] = rows;
  return out;
}

json to_json(WhiteheadTrace const& trace) {
  Alphabet const alpha = Alphabet::standard(trace.rank);
  json steps = json::array();
  for (auto const& s : trace.steps) {
    json cut = json::array();
    for (std::size_t r = 0; r < 2 * trace.rank; ++r) {
      if (in_cut(s.move.cut, letter_from_rank(r))) {
        cut.push_back(format_word(Word{letter_from_rank(r)}, alpha));
      }
    }
    steps.push_back({{"multiplier",
                      format_word(Word{s.move.multiplier}, alpha)},
                     {"cut", cut},
                     {"result", format_word(s.result, alpha)}});
  }
  return {{"rank", trace.rank},
          {"start", format_word(trace.start, alpha)},
          {"steps", steps},
          {"minimal", format_word(trace.minimal, alpha)},
          {"primitive", trace.primitive}};
}

json to_json(HnnSplitting const& s, Presentation const& p) {
  Alphabet const vertex = Alphabet::numbered("a", s.top + 1);
  json out = {{"kind", to_string(s.kind)},
              {"stable_letter_in_basis", s.stable},
              {"relator_in_basis", format_word(s.relator, p.generators)},
              {"basis", words(s.basis_change.backward().images, p.generators)},
              {"top", s.top},
              {"magnus_relator", format_word(s.magnus_relator, vertex)},
              {"lowest_occurrences", s.lowest_occurrences},
              {"highest_occurrences", s.highest_occurrences},
              {"trace", s.trace}};
  if (!s.free_basis.empty()) {
    Alphabet const fb = Alphabet::standard(s.free_basis.size());
    out["stable_sign"] = s.stable_sign;
    out["free_basis"] = words(s.free_basis, p.generators);
    out["images"] = words(s.images, fb);
  }
  return out;
}

json to_json(Endomorphism const& theta) {
  json images = json::object();
  for (std::size_t i = 0; i < theta.rank(); ++i) {
    images[theta.alphabet().name(i)] =
        format_word(theta.images()[i], theta.alphabet());
  }
  return {{"alphabet", theta.alphabet().names()}, {"images", images}};
}

json to_json(Endomorphism const& theta, PeriodicWitness const& w) {
  return {{"x", format_word(w.x, theta.alphabet())},
          {"g", format_word(w.g, theta.alphabet())},
          {"d", w.d},
          {"i", w.i}};
}

json to_json(PrimitivityCertificate const& c) {
  json chain = json::array();
  for (auto const& st : c.chain) {
    Alphabet const a = Alphabet::standard(st.rank);
    chain.push_back({{"rank", st.rank},
                     {"theta", words(st.theta, a)},
                     {"w", format_word(st.w, a)},
                     {"basis_size", st.basis.size()}});
  }
  json lemma = json::array();
  for (auto const& l : c.lemma) {
    lemma.push_back({{"stage", l.stage},
                     {"lower_powers_in_h", l.lower_powers_in_h},
                     {"power_primitive", l.power_primitive}});
  }
  return {{"d", c.d},
          {"chain", chain},
          {"terminal_trace", to_json(c.terminal_trace)},
          {"lemma", lemma},
          {"ambient_trace", to_json(c.ambient_trace)}};
}

json to_json(StrictWitness const& w) {
  Alphabet const& alpha = w.normalized.theta_prime.alphabet();
  return {{"normalized",
           {{"theta_prime", to_json(w.normalized.theta_prime)},
            {"w", format_word(w.normalized.w, alpha)},
            {"d", w.normalized.d}}},
          {"certificate", to_json(w.certificate)},
          {"rebased", to_json(w.rebased)},
          {"doubled", w.doubled},
          {"d", w.d},
          {"p", w.p},
          {"presentation", to_json(w.presentation)},
          {"subgroup", to_json(w.cover)},
          {"rewritten_generators", w.rewritten.presentation.rank()},
          {"rewritten_relators", w.rewritten.presentation.relators.size()},
          {"rank", w.rank},
          {"golod_shafarevich", to_json(w.golod_shafarevich)},
          {"trace", w.trace}};
}

json to_json(VsaWitness const& w) {
  return {{"index", w.subgroup.index},
          {"prime", w.p},
          {"rank", w.rank},
          {"subgroup", to_json(w.subgroup)},
          {"rewritten_generators", w.rewritten.presentation.rank()},
          {"rewritten_relators", w.rewritten.presentation.relators.size()},
          {"dropped_generators", w.rewritten.dropped}};
}

json to_json(VsaSearchResult const& r) {
  json out = {{"found", r.witness.has_value()},
              {"searched_index", r.searched_index},
              {"subgroups_examined", r.subgroups_examined},
              {"best_rank", r.best_rank},
              {"budget_exhausted", r.budget_exhausted},
              {"primes", r.primes}};
  if (r.witness) {
    out["witness"] = to_json(*r.witness);
  }
  return out;
}

json to_json(FbyzWitness const& w) {
  return {{"d", w.d},
          {"presentation", to_json(w.presentation)},
          {"witness", to_json(w.witness)}};
}

json to_json(GbsGraph const& g) {
  json edges = json::array();
  for (auto const& e : g.edges) {
    edges.push_back({{"u", g.vertices[e.u]},
                     {"v", g.vertices[e.v]},
                     {"l", e.l},
                     {"r", e.r}});
  }
  return {{"vertices", g.vertices}, {"edges", edges}};
}

json to_json(GbsVerdict const& v) {
  return {{"kind", to_string(v.kind)},
          {"acylindrically_hyperbolic", v.acylindrically_hyperbolic},
          {"reason", v.reason}};
}

json to_json(CircleData const& c) {
  json labels = json::array();
  for (auto const& [l, r] : c.labels) {
    labels.push_back({l, r});
  }
  return {{"n", c.n},
          {"vertices", c.vertices},
          {"labels", labels},
          {"L", c.lprod},
          {"R", c.rprod},
          {"coprime", c.coprime}};
}

json to_json(QuotientRelation const& q) {
  return {{"relation", format_word(q.relation, q.alphabet)},
          {"R", q.R},
          {"L", q.L},
          {"derivation", q.derivation},
          {"conclusion", q.conclusion}};
}

json to_json(TwoGeneratorReduction const& r) {
  return {{"presentation", to_json(r.presentation)},
          {"one_relator", r.one_relator},
          {"trace", r.trace}};
}

json to_json(Certificate const& c) {
  return {{"kind", c.kind}, {"statement", c.statement}, {"data", c.data}};
}

json to_json(BoundedGeneration const& b) {
  return {{"answer", to_string(b.answer)}, {"reason", b.reason}};
}

json to_json(Verdict const& v, bool with_timings) {
  json certs = json::array();
  for (auto const& c : v.certificates) {
    certs.push_back(to_json(c));
  }
  json out = {{"label", to_string(v.label)},
              {"certificates", certs},
              {"citations", v.citations},
              {"budgets", v.budgets}};
  if (with_timings) {
    json t = json::object();
    for (auto const& [k, ms] : v.timings) {
      t[k] = ms;
    }
    out["timings"] = t;
  }
  return out;
}

}  // namespace rankone
