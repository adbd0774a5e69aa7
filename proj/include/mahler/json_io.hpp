#pragma once

#include <string>

#include <json.hpp>

#include "mahler/hilbert.hpp"
#include "mahler/kronecker.hpp"
#include "mahler/lift.hpp"
#include "mahler/proof.hpp"
#include "mahler/relation_ideal.hpp"
#include "mahler/system.hpp"

namespace mahler {

using Json = nlohmann::ordered_json;

Json to_json(const Rational& r);
Json to_json(const Poly& p);
Json to_json(const RatFunc& r);  // bare array when the denominator is 1
Json to_json(const TruncSeries& s);
Json to_json(const QVector& v);
Json to_json(const QMatrix& m);
Json to_json(const RMatrix& m);
Json to_json(const LogValue& v);
Json to_json(const MahlerSystem& sys);
Json to_json(const RegularityCertificate& c);

Rational rational_from_json(const Json& j);
Poly poly_from_json(const Json& j);
RatFunc ratfunc_from_json(const Json& j);
QVector qvector_from_json(const Json& j);
MahlerSystem system_from_json(const Json& j);  // rejects unknown keys
MahlerSystem load_system(const std::string& path);

// Results that round-trip.
RegularityCertificate certificate_from_json(const Json& j);
Json to_json(const KernelBasis& k);
KernelBasis kernel_from_json(const Json& j);
Json to_json(const LiftResult& r);
LiftResult lift_from_json(const Json& j);
Json to_json(const AlgebraicLift& r);
AlgebraicLift algebraic_lift_from_json(const Json& j);

// Output-only reports.
Json to_json(const ValueCheck& c);
Json to_json(const FunctionRelationBasis& b);
Json to_json(const DimProfile& p);
Json to_json(const DoublingReport& r);
Json to_json(const PhiProfile& p);
Json to_json(const TrdegEstimate& t);
Json to_json(const BoundsReport& r);
Json to_json(const AuxFunction& a);
Json to_json(const DecayReport& r);
Json to_json(const HeightGrowth& h);

}  // namespace mahler
