#pragma once

// JSON renderings shared by the command-line tool and the certificates
// attached to verdicts. Coset numbers are 1-based in every rendering.

#include <nlohmann/json.hpp>

#include "rankone/classify.hpp"
#include "rankone/gbs.hpp"
#include "rankone/hnn.hpp"
#include "rankone/homology.hpp"
#include "rankone/presentation.hpp"
#include "rankone/subgroup.hpp"

namespace rankone {

using nlohmann::json;

// Integers that fit in 64 bits become numbers, larger ones strings.
json to_json(mpz_class const& n);

json to_json(Presentation const& p);
// {index, generators, subgroup_generators, action: {x: [images]}}
json to_json(CosetTable const& t);
json to_json(AbelianInvariants const& inv);
json to_json(GolodShafarevichReport const& r);
// {deficiency, betti, torsion, per_prime: [{p, d_p, gs_violated}]}
json to_json(HomologyReport const& r);
json to_json(WhiteheadTrace const& trace);
json to_json(HnnSplitting const& s, Presentation const& p);
json to_json(Endomorphism const& theta);
json to_json(Endomorphism const& theta, PeriodicWitness const& w);
json to_json(PrimitivityCertificate const& c);
json to_json(StrictWitness const& w);
json to_json(VsaWitness const& w);
json to_json(VsaSearchResult const& r);
json to_json(FbyzWitness const& w);
json to_json(GbsGraph const& g);
json to_json(GbsVerdict const& v);
json to_json(CircleData const& c);
json to_json(QuotientRelation const& q);
json to_json(TwoGeneratorReduction const& r);
json to_json(Certificate const& c);
json to_json(BoundedGeneration const& b);
// {label, certificates, citations, budgets, timings}; timings are omitted
// when with_timings is false.
json to_json(Verdict const& v, bool with_timings = true);

}  // namespace rankone
