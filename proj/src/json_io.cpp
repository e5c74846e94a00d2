#include "kza/json_io.hpp"

namespace kza {

nlohmann::json series_to_json(const TruncatedSeries& s) {
  nlohmann::json terms = nlohmann::json::array();
  for (int r = 0; r <= s.order(); ++r) {
    for (const auto& t : s.coeff(r).terms()) {
      nlohmann::json word = nlohmann::json::array();
      for (std::size_t i = 0; i < t.first.size(); ++i)
        word.push_back(s.alphabet()->name(t.first[i]));
      terms.push_back({{"lambda", r},
                       {"word", word},
                       {"re", t.second.real()},
                       {"im", t.second.imag()}});
    }
  }
  return {{"order", s.order()}, {"alphabet", s.alphabet()->names()}, {"terms", terms}};
}

TruncatedSeries series_from_json(const nlohmann::json& j) {
  AlphabetPtr alphabet = make_alphabet(j.at("alphabet").get<std::vector<std::string>>());
  TruncatedSeries s(j.at("order").get<int>(), alphabet);
  for (const auto& term : j.at("terms")) {
    int r = term.at("lambda").get<int>();
    if (r < 0 || r > s.order()) throw std::invalid_argument("term degree out of range");
    std::vector<uint8_t> ids;
    for (const auto& g : term.at("word")) {
      int id = alphabet->index_of(g.get<std::string>());
      if (id < 0) throw std::invalid_argument("unknown generator in term word");
      ids.push_back((uint8_t)id);
    }
    Cplx c(term.at("re").get<double>(), term.at("im").get<double>());
    s.set_coeff(r, s.coeff(r) + AlgebraElement::single_term(Word::from_ids(ids), c));
  }
  return s;
}

nlohmann::json verify_report_to_json(const VerifyReport& r) {
  nlohmann::json j = {{"identity", r.identity},
                      {"mode", r.mode},
                      {"tolerance", r.tolerance},
                      {"residual_per_degree", r.residual_per_degree},
                      {"max_residual", r.max_residual},
                      {"pass", r.pass}};
  if (r.mode == "finite-delta") j["delta"] = r.delta;
  if (!r.grid.empty()) j["grid"] = r.grid;
  if (!r.convergence.empty()) j["convergence"] = r.convergence;
  return j;
}

nlohmann::json lbh_to_json(const LbhDiagnostics& d) {
  nlohmann::json per = nlohmann::json::array();
  for (std::size_t r = 0; r < d.per_degree.size(); ++r) {
    const LbhFit& f = d.per_degree[r];
    const char* cls = f.cls == LbhClass::L ? "L" : (f.cls == LbhClass::B ? "B" : "H");
    nlohmann::json e = {{"degree", r}, {"class", cls}, {"C", f.scale}, {"rms", f.rms}};
    if (f.cls == LbhClass::L) e["alpha"] = f.exponent;
    if (f.cls == LbhClass::H) e["beta"] = f.exponent;
    e["norms"] = d.norms[r];
    per.push_back(e);
  }
  return {{"grid", d.grid}, {"per_degree", per}};
}

}  // namespace kza
