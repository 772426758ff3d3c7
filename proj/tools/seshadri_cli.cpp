// seshadri: command-line front end for the library.
//
// Exit codes: 0 success, 2 invalid input, 3 internal invariant violation.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "seshadri/scan.hpp"
#include "seshadri/symmetry.hpp"

using json = nlohmann::ordered_json;
using namespace seshadri;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

json rat_json(const Rat& r) { return to_string(r); }

json surd_json(const Surd& s) { return json{{"a", to_string(s.a())}, {"b", to_string(s.b())}, {"e", s.e()}}; }

json value_json(const SeshadriResult& r) {
  if (r.is_rational()) return rat_json(r.rational());
  return json{{"sqrt", to_string(std::get<SqrtRat>(r.value).radicand())}};
}

json bound_json(const PellBound& b) {
  return json{{"lambda", rat_json(b.lambda)}, {"l", b.l().get_str()}, {"k", b.k().get_str()},
              {"c0", rat_json(b.c0)},         {"c1", rat_json(b.c1)}};
}

json interval_json(const SubmaxInterval& J, bool approx) {
  json j{{"lo", surd_json(J.lo)}, {"hi", surd_json(J.hi)}};
  if (approx) {
    j["lo_approx"] = static_cast<double>(J.lo.approx());
    j["hi_approx"] = static_cast<double>(J.hi.approx());
  }
  return j;
}

json matrix_json(const IsometryMatrix& M) {
  return json::array({json::array({M.m00.get_str(), M.m01.get_str()}), json::array({M.m10.get_str(), M.m11.get_str()})});
}

json witness_json(const TwoCurveWitness& w, bool approx) {
  return json{{"lambda1", rat_json(w.bound1.lambda)},
              {"lambda2", rat_json(w.bound2.lambda)},
              {"bounds", json::array({bound_json(w.bound1), bound_json(w.bound2)})},
              {"J1", interval_json(w.J1, approx)},
              {"J2", interval_json(w.J2, approx)},
              {"overlap", interval_json(w.overlap, approx)},
              {"covering_check_qbound", w.covering_check_qbound.get_str()}};
}

std::pair<Rat, Rat> parse_pair(const std::string& text, const std::string& sep, const char* what) {
  auto pos = text.find(sep);
  if (pos == std::string::npos) throw UsageError(std::string(what) + " must look like x" + sep + "y");
  return {parse_rat(text.substr(0, pos)), parse_rat(text.substr(pos + sep.size()))};
}

struct Common {
  std::string ring = "sqrt";
  long e = 0;
  bool approx = false;
  std::string out;
  unsigned threads = 1;

  OrderSpec order() const { return OrderSpec(parse_ring(ring), e); }
};

void add_order_flags(CLI::App* cmd, Common& c) {
  cmd->add_option("--ring", c.ring, "endomorphism ring: sqrt (Z[sqrt e]) or half (Z[1/2+sqrt(e)/2])")
      ->check(CLI::IsMember({"sqrt", "half"}));
  cmd->add_option("--e", c.e, "the integer e")->required();
}

void add_output_flags(CLI::App* cmd, Common& c) {
  cmd->add_flag("--approx", c.approx, "add decimal renderings (marked *_approx)");
  cmd->add_option("--out", c.out, "write to this file instead of stdout");
}

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw UsageError("cannot open output file " + path);
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

// ---------------------------------------------------------------------------

int cmd_epsilon(const Common& c, const std::string& bundle, const std::string& t_text) {
  OrderSpec o = c.order();
  if (bundle.empty() == t_text.empty()) throw UsageError("give exactly one of --bundle a,b or --t p/q");
  BundleClass L;
  if (!bundle.empty()) {
    auto [a, b] = parse_pair(bundle, ",", "--bundle");
    L = {a, b};
  } else {
    L = {Rat(1), parse_rat(t_text)};
  }
  SeshadriResult r = epsilon_class(L, o);
  Normalized n = normalize(L);
  json j{{"ring", ring_name(o.ring())}, {"e", o.e()},       {"bundle", to_string(L)},
         {"lambda", rat_json(n.t)},     {"epsilon", value_json(r)}, {"kind", kind_name(r.kind)}};
  json ws = json::array();
  for (const auto& w : r.witnesses) ws.push_back(bound_json(w));
  j["witnesses"] = ws;
  if (r.witnesses.size() == 1 && r.witnesses.front().lambda == n.t) {
    // the bundle's own Pell bound is the unique minimizer: report the curve
    CurveCertificate cert = make_certificate(r.witnesses.front(), o);
    json opts = json::array();
    for (const auto& opt : cert.class_options)
      opts.push_back(json{{"class", opt.q_coeff.get_str() + "," + opt.p_coeff.get_str()},
                          {"multiplicity", opt.multiplicity.get_str()}});
    j["curve_class_options"] = opts;
  }
  if (c.approx) j["epsilon_approx"] = static_cast<double>(r.approx());
  Output out(c.out);
  out.stream() << j.dump(2) << "\n";
  return 0;
}

int cmd_plot(const Common& c, const std::string& range, long qmax, const std::string& format, bool extend) {
  OrderSpec o = c.order();
  if (qmax < 1) throw Error(ErrorCode::InvalidRange, "qmax must be >= 1");
  if (format != "json" && format != "csv") throw UsageError("--format must be json or csv");
  FundamentalInterval F = fundamental_interval(o);
  Rat lo, hi;
  if (!range.empty()) {
    std::tie(lo, hi) = parse_pair(range, "..", "--range");
  } else {
    // the nef interval, rounded inwards to hundredths
    auto [nlo, nhi] = nef_interval(o);
    lo = make_rat(floor_surd(nlo * Rat(100)) + 1, 100);
    hi = make_rat(floor_surd(nhi * Rat(100)), 100);
  }
  Int q(static_cast<long>(qmax));
  auto segs = extend ? sample_function_by_group(lo, hi, q, o, c.threads) : sample_function(lo, hi, q, o, c.threads);
  Output out(c.out);
  std::ostream& os = out.stream();
  if (format == "csv") {
    os << "# fundamental_interval," << to_string(F.lo) << "," << to_string(F.hi) << "\n";
    os << "lo_a,lo_b,hi_a,hi_b,c0,c1,lambda,certified";
    if (c.approx) os << ",lo_approx,hi_approx";
    os << "\n";
    for (const auto& s : segs) {
      os << to_string(s.lo.a()) << "," << to_string(s.lo.b()) << "," << to_string(s.hi.a()) << ","
         << to_string(s.hi.b()) << ",";
      if (s.bound)
        os << to_string(s.bound->c0) << "," << to_string(s.bound->c1) << "," << to_string(s.bound->lambda);
      else
        os << ",,";
      os << "," << (s.certified ? "true" : "false");
      if (c.approx) {
        std::ostringstream a;
        a.precision(12);
        a << "," << static_cast<double>(s.lo.approx()) << "," << static_cast<double>(s.hi.approx());
        os << a.str();
      }
      os << "\n";
    }
    return 0;
  }
  json arr = json::array();
  for (const auto& s : segs) {
    json js{{"lo", surd_json(s.lo)}, {"hi", surd_json(s.hi)}};
    js["bound"] = s.bound ? bound_json(*s.bound) : json(nullptr);
    js["certified"] = s.certified;
    if (c.approx) {
      js["lo_approx"] = static_cast<double>(s.lo.approx());
      js["hi_approx"] = static_cast<double>(s.hi.approx());
    }
    arr.push_back(js);
  }
  json j{{"ring", ring_name(o.ring())},
         {"e", o.e()},
         {"qmax", qmax},
         {"range", json::array({rat_json(lo), rat_json(hi)})},
         {"fundamental_interval", json::array({rat_json(F.lo), rat_json(F.hi)})},
         {"extended_by_group", extend},
         {"segments", arr}};
  os << j.dump(2) << "\n";
  return 0;
}

int cmd_fundamental(const Common& c, long kmin, long kmax) {
  OrderSpec o = c.order();
  Generators g = generators(o);
  FundamentalInterval F = fundamental_interval(o);
  json pols = json::array();
  long k = kmin;
  for (const auto& L : principal_polarizations(o, kmin, kmax)) {
    json pj{{"k", k++}, {"class", to_string(L)}, {"t", rat_json(L.b / L.a)}};
    pols.push_back(pj);
  }
  json j{{"ring", ring_name(o.ring())},
         {"e", o.e()},
         {"generators", json{{"gen", matrix_json(g.gen)}, {"invol", matrix_json(g.invol)}}},
         {"alpha0", g.alpha0.get_str()},
         {"beta0", g.beta0.get_str()},
         {"principal_polarizations", pols},
         {"fundamental_interval", json::array({rat_json(F.lo), rat_json(F.hi)})}};
  if (c.approx) j["fundamental_interval_approx"] = json::array({F.lo.get_d(), F.hi.get_d()});
  Output out(c.out);
  out.stream() << j.dump(2) << "\n";
  return 0;
}

int cmd_scan(const Common& c, long e_max, long qmax, long escalate_to, long kmax) {
  if (parse_ring(c.ring) != Ring::Half) throw UsageError("scan runs over the half ring only (use --ring half)");
  if (qmax < 1) throw Error(ErrorCode::InvalidRange, "qmax must be >= 1");
  Output out(c.out);
  std::ostream& os = out.stream();
  ScanOptions opt;
  opt.threads = c.threads;
  opt.escalate_to = Int(static_cast<long>(std::max(escalate_to, qmax)));
  // 0 lifts the filter on Pell solution size
  if (kmax > 0)
    opt.kmax = Int(kmax);
  else
    opt.kmax.reset();
  for (const auto& rec : scan_range(e_max, Int(static_cast<long>(qmax)), opt)) {
    json j{{"e", rec.e}, {"qmax", rec.qmax.get_str()}};
    if (rec.witness)
      j["witness"] = witness_json(*rec.witness, c.approx);
    else
      j["witness"] = "none@" + rec.qmax.get_str();
    os << j.dump() << "\n";
  }
  return 0;
}

int cmd_classify(const Common& c, long e) {
  Classification cl = classify_e(e);
  json j{{"e", e}, {"no_bad_prime", cl.no_bad_prime}, {"minus2_qr", cl.minus2_qr}};
  if (cl.repr_A_8B)
    j["repr_A_8B"] = json{{"A", cl.repr_A_8B->first}, {"B", cl.repr_A_8B->second}};
  else
    j["repr_A_8B"] = nullptr;
  j["agree"] = cl.no_bad_prime == cl.minus2_qr && cl.minus2_qr == cl.repr_A_8B.has_value();
  Output out(c.out);
  out.stream() << j.dump(2) << "\n";
  return 0;
}

int cmd_check_en(const Common& c, long n, long qmax) {
  EnCheck r = check_en(n, Int(static_cast<long>(qmax)));
  json j{{"n", r.n},
         {"e", r.e},
         {"common_point", rat_json(r.common_point)},
         {"witness", witness_json(r.witness, c.approx)}};
  Output out(c.out);
  out.stream() << j.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Seshadri constants on principally polarized abelian surfaces with real multiplication"};
  app.require_subcommand(1);

  Common c;
  std::string bundle, t_text, range, format = "json";
  long qmax = 100, kmin = -2, kmax = 2, e_max = 1000, n = 2, escalate_to = 0, e_classify = 0, scan_kmax = 256;
  bool extend = false;

  auto* eps = app.add_subcommand("epsilon", "exact Seshadri constant of a bundle");
  add_order_flags(eps, c);
  add_output_flags(eps, c);
  eps->add_option("--bundle", bundle, "class a,b meaning a L0 + b Linf");
  eps->add_option("--t", t_text, "ray point p/q meaning L0 + t Linf");

  auto* plot = app.add_subcommand("plot", "segments of the Seshadri function");
  add_order_flags(plot, c);
  add_output_flags(plot, c);
  plot->add_option("--qmax", qmax, "largest denominator searched");
  plot->add_option("--range", range, "lo..hi (rationals); default: nef interval rounded inwards");
  plot->add_option("--format", format, "json or csv");
  plot->add_option("--threads", c.threads, "worker threads");
  plot->add_flag("--extend-by-group", extend, "compute on the fundamental interval and transport by the group");

  auto* fund = app.add_subcommand("fundamental", "generators, principal polarizations, fundamental interval");
  add_order_flags(fund, c);
  add_output_flags(fund, c);
  fund->add_option("--kmin", kmin, "first principal polarization index");
  fund->add_option("--kmax", kmax, "last principal polarization index");

  auto* scan = app.add_subcommand("scan", "two-curve witness search over e (JSON lines)");
  std::string scan_ring = "half";
  scan->add_option("--ring", scan_ring, "must be half")->check(CLI::IsMember({"sqrt", "half"}));
  add_output_flags(scan, c);
  scan->add_option("--e-max", e_max, "largest e");
  scan->add_option("--qmax", qmax, "largest denominator searched");
  scan->add_option("--escalate-to", escalate_to, "retry with doubled qmax up to this value when nothing is found");
  scan->add_option("--threads", c.threads, "worker threads");
  scan->add_option("--kmax", scan_kmax, "skip Pell solutions with k above this (0: no limit)");

  auto* cls = app.add_subcommand("classify", "prime / residue / quadratic form conditions on e");
  cls->add_option("--e", e_classify, "the integer e")->required();
  add_output_flags(cls, c);

  auto* en = app.add_subcommand("check-en", "two submaximal curves for e = 1 + 8 n^2");
  en->add_option("--n", n, "n")->required();
  en->add_option("--qmax", qmax, "largest denominator allowed in the covering check");
  add_output_flags(en, c);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    int code = app.exit(err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*eps) return cmd_epsilon(c, bundle, t_text);
    if (*plot) return cmd_plot(c, range, qmax, format, extend);
    if (*fund) return cmd_fundamental(c, kmin, kmax);
    if (*scan) {
      c.ring = scan_ring;
      return cmd_scan(c, e_max, qmax, escalate_to, scan_kmax);
    }
    if (*cls) return cmd_classify(c, e_classify);
    if (*en) return cmd_check_en(c, n, qmax);
  } catch (const seshadri::Error& err) {
    std::string msg = err.what();
    if (err.code() == ErrorCode::NotAmple) msg += " (not ample)";
    std::cerr << "error: " << msg << "\n";
    return 2;
  } catch (const UsageError& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 2;
  } catch (const std::exception& err) {
    std::cerr << "internal error: " << err.what() << "\n"
              << "This is a bug; please report the command line that triggered it.\n";
    return 3;
  }
  return 2;
}
