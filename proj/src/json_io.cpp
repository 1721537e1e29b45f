#include "partlab/json_io.hpp"

#include <limits>

namespace partlab {

namespace {

Json integer_to_json(const mpz_class& z) {
  if (z.fits_slong_p()) return Json(z.get_si());
  return Json(z.get_str());
}

mpz_class integer_from_json(const Json& j) {
  if (j.is_number_integer()) {
    mpz_class z;
    mpz_set_si(z.get_mpz_t(), j.get<long>());
    return z;
  }
  if (j.is_string()) {
    mpz_class z;
    if (z.set_str(j.get<std::string>(), 10) != 0) throw Error(ErrorKind::Usage, "bad integer string in JSON");
    return z;
  }
  throw Error(ErrorKind::Usage, "expected an integer in JSON");
}

template <Scalar S>
S scalar_from_json(const Json& j) {
  if constexpr (is_exact_v<S>) {
    return rational_from_json(j);
  } else {
    if (j.is_object()) return rational_from_json(j).get_d();
    if (!j.is_number()) throw Error(ErrorKind::Usage, "expected a number in JSON");
    return j.get<double>();
  }
}

}  // namespace

Json to_json(const SetPartition& partition) {
  return Json{{"n", partition.n()}, {"blocks", partition.blocks()}};
}

SetPartition partition_from_json(const Json& j) {
  try {
    return SetPartition(j.at("n").get<unsigned>(), j.at("blocks").get<std::vector<std::vector<unsigned>>>());
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::MalformedPartition, std::string("bad partition JSON: ") + e.what());
  }
}

Json scalar_to_json(const Rational& q) {
  return Json{{"num", integer_to_json(q.get_num())}, {"den", integer_to_json(q.get_den())}};
}

Json scalar_to_json(double x) { return Json(x); }

Rational rational_from_json(const Json& j) {
  if (j.is_number_integer()) return Rational(integer_from_json(j));
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (!j.is_object() || !j.contains("num") || !j.contains("den")) {
    throw Error(ErrorKind::Usage, "expected {\"num\": ..., \"den\": ...}");
  }
  const mpz_class den = integer_from_json(j.at("den"));
  if (den == 0) throw Error(ErrorKind::Usage, "zero denominator in JSON");
  Rational q(integer_from_json(j.at("num")), den);
  q.canonicalize();
  return q;
}

template <Scalar S>
Json to_json(const FrequencyVector<S>& frequencies) {
  Json p = Json::array();
  for (const S& v : frequencies.p) p.push_back(scalar_to_json(v));
  return Json{{"p", p}, {"dust", scalar_to_json(frequencies.dust)}, {"residual", scalar_to_json(frequencies.residual)}};
}

template <Scalar S>
FrequencyVector<S> frequencies_from_json(const Json& j) {
  FrequencyVector<S> out;
  try {
    for (const auto& v : j.at("p")) out.p.push_back(scalar_from_json<S>(v));
    out.dust = j.contains("dust") ? scalar_from_json<S>(j.at("dust")) : from_int<S>(0);
    out.residual = j.contains("residual") ? scalar_from_json<S>(j.at("residual")) : from_int<S>(0);
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::Usage, std::string("bad frequency JSON: ") + e.what());
  }
  out.validate();
  return out;
}

template Json to_json(const FrequencyVector<Rational>&);
template Json to_json(const FrequencyVector<double>&);
template FrequencyVector<Rational> frequencies_from_json(const Json&);
template FrequencyVector<double> frequencies_from_json(const Json&);

}  // namespace partlab
