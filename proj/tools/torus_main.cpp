#include <functional>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "torus/classic.hpp"
#include "torus/io.hpp"
#include "torus/quasiconvex.hpp"

using namespace torus;

namespace {

Json load_json(const std::string& path) {
  return Json::parse(read_text_file(path));
}

void emit(const Json& j, const std::string& out_path) {
  std::string text = j.dump(2) + "\n";
  if (out_path.empty())
    std::cout << text;
  else
    write_text_file(out_path, text);
}

std::vector<TorusPoint> parse_points(const std::vector<std::string>& raw) {
  std::vector<TorusPoint> pts;
  for (const auto& s : raw) pts.push_back(parse_point(s));
  return pts;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact characterizing sets of characters on finite tori"};
  app.require_subcommand(1);

  auto* c_char = app.add_subcommand(
      "characterize", "characterizing set for the subgroup a tower exhausts");
  std::string ch_tower, ch_out, ch_eps0 = "1/8";
  std::size_t ch_levels = 4;
  CoveringBudget ch_budget;
  c_char->add_option("--tower", ch_tower, "tower JSON file")->required();
  c_char->add_option("--levels", ch_levels, "levels to produce");
  c_char->add_option("--out", ch_out, "output file (default stdout)");
  c_char->add_option("--eps0", ch_eps0, "cap on the first epsilon");
  c_char->add_option("--max-candidates", ch_budget.max_candidates);
  c_char->add_option("--residue-budget", ch_budget.residue_budget);
  c_char->add_option("--cell-depth", ch_budget.cell_depth);

  auto* c_qhull = app.add_subcommand(
      "qhull", "quasi-convex hull of finitely many points");
  std::vector<std::string> qh_points;
  int qh_m = 0;
  std::size_t qh_dim = 0, qh_residue = std::size_t(1) << 21,
              qh_candidates = std::size_t(1) << 22;
  std::string qh_out;
  c_qhull->add_option("points", qh_points, "points of E")->required();
  c_qhull->add_option("--m", qh_m, "window exponent");
  c_qhull->add_option("--dim", qh_dim, "ambient dimension");
  c_qhull->add_option("--residue-budget", qh_residue);
  c_qhull->add_option("--candidate-budget", qh_candidates);
  c_qhull->add_option("--out", qh_out);

  auto* c_verify = app.add_subcommand(
      "verify", "membership profile of a point against a character set");
  std::string v_b, v_x, v_csv, v_out, v_threshold = "1/4";
  std::size_t v_n = 0, v_quota = 3;
  c_verify->add_option("--B", v_b, "character set JSON file")->required();
  c_verify->add_option("--x", v_x, "point to test")->required();
  c_verify->add_option("--N", v_n, "prefix length (default: all)");
  c_verify->add_option("--csv", v_csv, "CSV output file");
  c_verify->add_option("--out", v_out, "JSON output file (default stdout)");
  c_verify->add_option("--threshold", v_threshold, "witness threshold");
  c_verify->add_option("--quota", v_quota, "witnesses needed for a verdict");

  auto* c_measure = app.add_subcommand(
      "measure", "Haar measure of sublevel sets along the levels");
  std::string m_b, m_delta = "1/8", m_out;
  std::size_t m_levels = 8, m_mc = 0;
  std::uint64_t m_seed = 20260819;
  c_measure->add_option("--B", m_b, "character set JSON file")->required();
  c_measure->add_option("--delta", m_delta, "sublevel bound");
  c_measure->add_option("--levels", m_levels, "level prefixes to report");
  c_measure->add_option("--mc", m_mc, "Monte-Carlo samples (0 = exact)");
  c_measure->add_option("--seed", m_seed, "Monte-Carlo seed");
  c_measure->add_option("--out", m_out);

  auto* c_perp = app.add_subcommand(
      "perp", "closure and annihilator of finitely many rational points");
  std::vector<std::string> p_points;
  std::size_t p_dim = 0, p_shells = 0;
  std::string p_out;
  c_perp->add_option("points", p_points, "generating points")->required();
  c_perp->add_option("--dim", p_dim, "ambient dimension");
  c_perp->add_option("--shells", p_shells, "annihilator shell levels to list");
  c_perp->add_option("--out", p_out);

  auto* c_snf = app.add_subcommand("snf", "Smith normal form of a matrix");
  std::string s_matrix, s_out;
  c_snf->add_option("--matrix", s_matrix, "matrix JSON file (rows)")
      ->required();
  c_snf->add_option("--out", s_out);

  auto* c_refute = app.add_subcommand(
      "refute", "adversarial point for a chain with infinite indices");
  std::string r_chain, r_b, r_out;
  std::size_t r_levels = 3, r_budget = std::size_t(1) << 20;
  c_refute->add_option("--chain", r_chain, "chain JSON file")->required();
  c_refute->add_option("--B", r_b, "character set JSON file")->required();
  c_refute->add_option("--levels", r_levels, "stages to defeat");
  c_refute->add_option("--budget", r_budget, "denominator budget");
  c_refute->add_option("--out", r_out, "witness output file");

  auto* c_expand = app.add_subcommand(
      "expand", "factorial-base expansion of a circle point");
  std::string e_x, e_out;
  std::size_t e_depth = 12;
  bool e_witnesses = false;
  c_expand->add_option("--x", e_x, "point to expand")->required();
  c_expand->add_option("--depth", e_depth, "digits to compute");
  c_expand->add_flag("--witnesses", e_witnesses,
                     "list witness pairs at the usable digits");
  c_expand->add_option("--out", e_out);

  auto* c_check = app.add_subcommand(
      "check-chain", "finite-index condition for a chain of subgroups");
  std::string k_chain, k_b, k_out;
  c_check->add_option("--chain", k_chain, "chain JSON file")->required();
  c_check->add_option("--B", k_b, "optional character set to partition");
  c_check->add_option("--out", k_out);

  auto* c_vcert = app.add_subcommand(
      "verify-cert", "re-check a covering certificate or refutation witness");
  std::string vc_cert, vc_chain, vc_b, vc_out;
  c_vcert->add_option("--cert", vc_cert, "certificate JSON file")->required();
  c_vcert->add_option("--chain", vc_chain, "chain file (refutation witnesses)");
  c_vcert->add_option("--B", vc_b, "character set (refutation witnesses)");
  c_vcert->add_option("--out", vc_out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (c_char->parsed()) {
      Tower tower = tower_from_json(load_json(ch_tower));
      Characterization res =
          characterize(tower, ch_levels, ch_budget, parse_rat(ch_eps0));
      emit(characterization_to_json(res), ch_out);
    } else if (c_qhull->parsed()) {
      std::vector<TorusPoint> e = parse_points(qh_points);
      std::size_t dim = qh_dim ? qh_dim : e.at(0).dim();
      QuasiHull h = quasi_hull(e, dim, qh_m, qh_residue, qh_candidates);
      Json out = Json::object();
      Json hull = Json::array();
      for (const auto& p : h.hull) hull.push_back(point_to_json(p));
      out["hull"] = std::move(hull);
      emit(out, qh_out);
    } else if (c_verify->parsed()) {
      CharSet b = charset_from_json(load_json(v_b));
      TorusPoint x = parse_point(v_x);
      std::size_t n = v_n ? v_n : b.total();
      TailProfile profile =
          tail_profile(x, b, n, parse_rat(v_threshold), v_quota);
      if (!v_csv.empty()) write_text_file(v_csv, profile_to_csv(profile));
      emit(profile_to_json(profile), v_out);
    } else if (c_measure->parsed()) {
      CharSet b = charset_from_json(load_json(m_b));
      Rat delta = parse_rat(m_delta);
      std::size_t levels = std::min(m_levels, b.level_count());
      if (m_mc > 0) {
        std::vector<Character> prefix;
        for (std::size_t n = 0; n < levels; ++n)
          for (const auto& phi : b.level(n)) prefix.push_back(phi);
        emit(mc_to_json(
                 mc_sublevel_estimate(prefix, b.dim(), delta, m_mc, m_seed)),
             m_out);
      } else {
        if (b.dim() != 1)
          throw std::invalid_argument(
              "exact measures are one-dimensional; pass --mc for d >= 2");
        Json arr = Json::array();
        for (const auto& r : measure_by_levels(b, delta, levels))
          arr.push_back(measure_report_to_json(r));
        emit(arr, m_out);
      }
    } else if (c_perp->parsed()) {
      std::vector<TorusPoint> pts = parse_points(p_points);
      std::size_t dim = p_dim ? p_dim : pts.at(0).dim();
      ClosedSubgroup n = closure(pts, dim);
      Json out = Json::object();
      out["annihilator"] = matrix_to_json(n.ann);
      out["rank"] = n.rank;
      out["order"] = n.order ? int_to_json(*n.order) : Json();
      if (p_shells > 0) {
        CharSet shells(dim);
        for (std::size_t lvl = 0; lvl < p_shells; ++lvl)
          shells.push_level(annihilator_shell(n, lvl));
        out["shells"] = charset_to_json(shells);
      }
      emit(out, p_out);
    } else if (c_snf->parsed()) {
      IntMatrix m = matrix_from_json(load_json(s_matrix));
      SmithResult s = snf(m);
      Json out = Json::object();
      out["D"] = matrix_to_json(s.D);
      out["U"] = matrix_to_json(s.U);
      out["V"] = matrix_to_json(s.V);
      out["rank"] = s.rank;
      Json diag = Json::array();
      for (const auto& d : s.diag) diag.push_back(int_to_json(d));
      out["diag"] = std::move(diag);
      emit(out, s_out);
    } else if (c_refute->parsed()) {
      ChainSpec chain = chain_from_json(load_json(r_chain));
      CharSet b = charset_from_json(load_json(r_b));
      RefutationWitness w = refutation_witness(chain, b, r_levels, r_budget);
      if (auto err = verify_refutation(w, chain, b))
        throw std::logic_error("emitted witness failed verification: " + *err);
      emit(witness_to_json(w), r_out);
    } else if (c_expand->parsed()) {
      TorusPoint x = parse_point(e_x);
      if (x.dim() != 1)
        throw std::invalid_argument("expansion is one-dimensional");
      FactorialDigits d = factorial_expand(x.x[0], e_depth);
      Json out = Json::object();
      Json digits = Json::array();
      for (const auto& c : d.digits) digits.push_back(int_to_json(c));
      out["digits"] = std::move(digits);
      out["terminated"] = d.terminated;
      Json tails = Json::array();
      for (const auto& t : d.tails) tails.push_back(real_to_string(t));
      out["tails"] = std::move(tails);
      if (e_witnesses) {
        Json ws = Json::array();
        for (std::size_t n = 1; n <= d.digits.size(); ++n)
          if (auto w = witness_pair(d, n)) {
            Json one = Json::object();
            one["n"] = w->n;
            one["k"] = int_to_json(w->k);
            one["value"] = real_to_string(w->value);
            ws.push_back(std::move(one));
          }
        out["witnesses"] = std::move(ws);
      }
      emit(out, e_out);
    } else if (c_check->parsed()) {
      ChainSpec chain = chain_from_json(load_json(k_chain));
      Json out = Json::object();
      out["condition"] = condition_c_to_json(check_condition_c(chain));
      if (!k_b.empty()) {
        CharSet b = charset_from_json(load_json(k_b));
        out["partition"] = partition_to_json(partition_B(b, chain));
      }
      emit(out, k_out);
    } else if (c_vcert->parsed()) {
      Json j = load_json(vc_cert);
      std::optional<std::string> err;
      if (j.contains("coords") && j.contains("t")) {
        if (vc_chain.empty() || vc_b.empty())
          throw std::invalid_argument(
              "refutation witnesses need --chain and --B");
        err = verify_refutation(witness_from_json(j),
                                chain_from_json(load_json(vc_chain)),
                                charset_from_json(load_json(vc_b)));
      } else if (j.contains("certificates")) {
        for (const auto& c : j.at("certificates")) {
          err = verify_covering(certificate_from_json(c));
          if (err) break;
        }
      } else if (j.contains("F")) {
        err = verify_covering(certificate_from_json(j));
      } else {
        throw std::invalid_argument("unrecognized certificate shape");
      }
      Json out = Json::object();
      out["ok"] = !err;
      if (err) out["error"] = *err;
      emit(out, vc_out);
      if (err) return 1;
    }
    return 0;
  } catch (const budget_exhausted& e) {
    std::cerr << "budget exhausted: " << e.what() << "\n";
    return 2;
  } catch (const precision_exhausted& e) {
    std::cerr << "precision exhausted: " << e.what() << "\n";
    return 2;
  } catch (const Json::exception& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
