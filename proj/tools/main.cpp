// coarse-geom: generators, certificates, verifiers, transport and the
// obstruction experiment.
//
// Exit status: 0 success, 1 a verifier recorded a violation, 2 usage or
// input error.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <limits>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "coarse/cayley.hpp"
#include "coarse/embed.hpp"
#include "coarse/graphs.hpp"
#include "coarse/io.hpp"
#include "coarse/obstruction.hpp"
#include "coarse/rng.hpp"
#include "coarse/spectral.hpp"
#include "coarse/transport.hpp"

namespace fs = std::filesystem;
using namespace coarse;

namespace {

constexpr int kExitViolation = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void require_input(const std::string &path) {
  if (path.empty())
    throw UsageError("missing input path");
  if (!fs::is_regular_file(path))
    throw UsageError("input file not found: " + path);
}

void require_output(const std::string &path) {
  if (path.empty())
    return;
  const fs::path parent = fs::absolute(path).parent_path();
  if (!fs::is_directory(parent))
    throw UsageError("output directory does not exist: " + parent.string());
}

void emit(const std::string &path, const std::string &content) {
  if (path.empty())
    std::cout << content;
  else
    write_file_atomic(path, content);
}

void require_seed(const CLI::Option *opt, const std::string &what) {
  if (opt->count() == 0)
    throw UsageError(what + " is randomized and needs --seed");
}

std::vector<int> sizes_from(const std::string &text) {
  try {
    return parse_size_list(text);
  } catch (const std::invalid_argument &e) {
    throw UsageError(e.what());
  }
}

FamilyKind family_from(const std::string &name) {
  try {
    return parse_family_kind(name);
  } catch (const std::invalid_argument &e) {
    throw UsageError(e.what());
  }
}

// gen ------------------------------------------------------------------------

struct GenArgs {
  int n = 0, degree = 4, radius = 2, rank = 2, p = 5, m = 0;
  std::uint64_t seed = 0;
  std::string group = "z2", out, norms;
};

MarkedGroup group_from(const GenArgs &a) {
  if (a.group == "z2")
    return MarkedGroup::free_abelian(2);
  if (a.group == "zk")
    return MarkedGroup::free_abelian(a.rank);
  if (a.group == "free")
    return MarkedGroup::free(a.rank);
  if (a.group == "cyclic")
    return MarkedGroup::cyclic_product(a.n, a.m == 0 ? a.n : a.m);
  if (a.group == "sl2")
    return MarkedGroup::sl2_mod_p(a.p);
  throw UsageError("unknown group: " + a.group);
}

// verify expander-inequalities ----------------------------------------------

struct InequalityArgs {
  std::string family = "margulis", sizes = "3..10", out;
  int degree = 4, samples = 2000, iters = 200;
  std::uint64_t seed = 0;
};

int run_inequalities(const InequalityArgs &a) {
  const auto fam = make_family(family_from(a.family), sizes_from(a.sizes), a.degree, a.seed);
  std::ostringstream csv;
  csv << "n,d_max,lambda1,c0,samples,max_d_ratio,max_pair_mean,max_mean_sq_norm,"
         "min_inside_fraction,optimizer_spread,h_exact,cheeger_ok,violations\n";
  long total_violations = 0;
  for (std::size_t i = 0; i < fam.members.size(); ++i) {
    const FiniteGraph &g = fam.members[i];
    const int n = g.vertex_count();
    const auto cert = lambda1(g);
    const double c0 = c0_bound(g, cert.lambda1);
    Rng rng(derive_seed(a.seed, i));
    long violations = 0;
    double max_ratio = 0, max_pair = 0, max_msn = 0, min_inside = 1;

    auto record = [&](const Embedding &e) {
      const auto r = corollary_report(g, e, c0);
      max_pair = std::max(max_pair, r.pair_mean);
      max_msn = std::max(max_msn, r.mean_squared_norm);
      min_inside = std::min(min_inside, static_cast<double>(r.inside_count) / r.total);
      violations += !r.pair_mean_ok() + !r.mean_squared_norm_ok() + !r.majority_inside();
    };
    for (int t = 0; t < a.samples; ++t) {
      const int dim = 1 + rng.index(3);
      Embedding e(n, dim);
      const bool near_witness = t % 2 == 1;
      const double noise = std::pow(10.0, -rng.uniform(0, 6));
      for (int v = 0; v < n; ++v)
        for (int k = 0; k < dim; ++k)
          e.point(v)[k] = near_witness ? cert.witness[v] * rng.normal() + noise * rng.normal()
                                       : rng.normal();
      if (!e.nonconstant())
        continue;
      const double ratio = d_ratio(g, e);
      max_ratio = std::max(max_ratio, ratio);
      violations += ratio > c0 + 1e-9;
      std::vector<double> f(n);
      for (int v = 0; v < n; ++v)
        f[v] = e.point(v)[0];
      if (std::any_of(f.begin(), f.end(), [&](double x) { return std::abs(x - f[0]) > 1e-12; }))
        violations += rayleigh_quotient(g, f) < cert.lambda1 - 1e-9;
      record(e);
    }
    const auto spread = max_spread_embedding(g, 3, a.iters, derive_seed(a.seed ^ 0x5eed, i));
    record(spread.embedding);
    violations += spread.spread > n * c0 / 2.0 + 1e-6;

    std::string h_text, cheeger_text;
    if (n <= kExhaustiveCheegerLimit) {
      const auto ch = cheeger_crosscheck(g);
      h_text = format_double(ch.h_exact.value());
      cheeger_text = ch.bounds_ok ? "1" : "0";
      violations += !ch.bounds_ok;
    }
    total_violations += violations;
    csv << n << ',' << g.max_degree() << ',' << format_double(cert.lambda1) << ','
        << format_double(c0) << ',' << a.samples << ',' << format_double(max_ratio) << ','
        << format_double(max_pair) << ',' << format_double(max_msn) << ','
        << format_double(min_inside) << ',' << format_double(spread.spread) << ',' << h_text
        << ',' << cheeger_text << ',' << violations << '\n';
  }
  emit(a.out, csv.str());
  return total_violations == 0 ? 0 : kExitViolation;
}

// verify transport-metric ---------------------------------------------------

struct TransportArgs {
  std::string input, out;
  int samples = 1000;
  std::uint64_t seed = 0;
};

FiniteMeasure random_probability(int n, int max_support, Rng &rng) {
  std::vector<int> pts(n);
  std::iota(pts.begin(), pts.end(), 0);
  rng.shuffle(pts);
  pts.resize(1 + rng.index(std::min(n, max_support)));
  std::vector<double> w(pts.size());
  double total = 0;
  for (double &x : w)
    total += (x = rng.uniform(0.01, 1.0));
  for (double &x : w)
    x /= total;
  return FiniteMeasure(pts, w);
}

int run_transport_metric(const TransportArgs &a) {
  const auto g = read_edge_list(fs::path(a.input));
  g.require_connected("verify transport-metric");
  const auto space = MetricSpaceTable::from_graph(g);
  const int n = space.size();
  Rng rng(a.seed);

  struct Row {
    std::string name;
    long trials = 0, failures = 0;
    double worst = 0;
  };
  Row dirac{"dirac_isometry"}, sym{"symmetry"}, tri{"triangle"}, zero{"identity"},
      bary{"bary_extend_bound"};
  const int dirac_points = std::min(n, 64);
  for (int i = 0; i < dirac_points; ++i)
    for (int j = 0; j < dirac_points; ++j) {
      const double d = kr_distance(FiniteMeasure::dirac(i), FiniteMeasure::dirac(j), space);
      ++dirac.trials;
      dirac.worst = std::max(dirac.worst, std::abs(d - space(i, j)));
      dirac.failures += d != space(i, j);
    }
  const auto dist = all_pairs_distances(g);
  for (int t = 0; t < a.samples; ++t) {
    const auto x = random_probability(n, 12, rng);
    const auto y = random_probability(n, 12, rng);
    const auto z = random_probability(n, 12, rng);
    const double xy = kr_distance(x, y, space);
    const double yx = kr_distance(y, x, space);
    ++sym.trials;
    sym.worst = std::max(sym.worst, std::abs(xy - yx));
    sym.failures += xy != yx;
    const double excess = xy - kr_distance(x, z, space) - kr_distance(z, y, space);
    ++tri.trials;
    tri.worst = std::max(tri.worst, excess);
    tri.failures += excess > 1e-9;
    const double self = std::abs(kr_distance(x, x, space));
    ++zero.trials;
    zero.worst = std::max(zero.worst, self);
    zero.failures += self > 1e-9;

    const int dim = 1 + rng.index(3);
    std::vector<std::vector<double>> values(n, std::vector<double>(dim));
    for (int k = 0; k < dim; ++k) {
      const int anchor = rng.index(n);
      for (int v = 0; v < n; ++v)
        values[v][k] = dist[static_cast<std::size_t>(v) * n + anchor];
    }
    const auto gx = bary_extend(values, x), gy = bary_extend(values, y);
    double d2 = 0;
    for (int k = 0; k < dim; ++k)
      d2 += (gx[k] - gy[k]) * (gx[k] - gy[k]);
    const double over = std::sqrt(d2) - dim * xy;
    ++bary.trials;
    bary.worst = std::max(bary.worst, over);
    bary.failures += over > 1e-9;
  }
  std::ostringstream csv;
  csv << "check,trials,failures,worst\n";
  long failures = 0;
  for (const Row *r : {&dirac, &sym, &tri, &zero, &bary}) {
    csv << r->name << ',' << r->trials << ',' << r->failures << ',' << format_double(r->worst)
        << '\n';
    failures += r->failures;
  }
  emit(a.out, csv.str());
  return failures == 0 ? 0 : kExitViolation;
}

// verify displacement -------------------------------------------------------

struct DisplacementArgs {
  std::string map = "identity", out;
  double scale = 1.0, r0 = 2.0, epsilon = 0.05;
  int radius = 8, samples = 1000;
  std::uint64_t seed = 0;
};

std::string format_point(const std::vector<std::int64_t> &p) {
  std::string s = "(";
  for (std::size_t i = 0; i < p.size(); ++i)
    s += (i ? " " : "") + std::to_string(p[i]);
  return s + ")";
}

int run_displacement(const DisplacementArgs &a) {
  std::ostringstream csv;
  csv << "check,pass,checks,worst_gamma,worst_x,worst_value\n";
  bool ok = true;
  if (a.map == "radial") {
    const auto map = radial_map_build(a.radius, a.r0, a.epsilon);
    const bool disp = map.displacement_ok();
    const bool wind = map.winding_number == 1;
    csv << "generator_displacement," << disp << ',' << map.interior_points * 4 << ",,,"
        << format_double(map.max_generator_displacement) << '\n';
    csv << "winding_number," << wind << ",1,,," << map.winding_number << '\n';
    ok = disp && wind;
  } else if (a.map == "identity" || a.map == "scaled") {
    const double s = a.map == "identity" ? 1.0 : a.scale;
    const auto ball = cayley_ball(MarkedGroup::free_abelian(2), a.radius);
    std::vector<Point> pts(ball.elements().begin(), ball.elements().end());
    const PointMap p = [s](const Point &x) {
      return std::vector<double>{s * static_cast<double>(x[0]), s * static_cast<double>(x[1])};
    };
    const auto d = displacement_check(ball, translation_action(), p, pts, {}, a.samples, a.seed);
    const auto r = prop2_crosscheck(ball, translation_action(), p, pts, {}, a.samples, a.seed);
    csv << "displacement," << d.pass << ',' << d.generator_checks + d.spot_checks << ','
        << format_point(d.worst.gamma) << ',' << format_point(d.worst.x) << ','
        << format_double(d.worst.displacement - d.worst.norm) << '\n';
    csv << "orbit_lipschitz," << r.pass << ',' << r.checks << ','
        << (r.pass ? "" : format_point(r.gamma1) + "->" + format_point(r.gamma2)) << ','
        << (r.pass ? "" : format_point(r.x)) << ',' << format_double(r.worst_excess) << '\n';
    csv << "verdicts_agree," << r.agree << ",1,,,\n";
    ok = d.pass && r.pass && r.agree;
  } else {
    throw UsageError("unknown map: " + a.map + " (identity, scaled, radial)");
  }
  emit(a.out, csv.str());
  return ok ? 0 : kExitViolation;
}

// transport kr ---------------------------------------------------------------

MetricSpaceTable load_space(const MeasureDocument &doc, const fs::path &base) {
  if (doc.space_path.empty())
    return doc.inline_space;
  fs::path p = doc.space_path;
  if (p.is_relative())
    p = base / p;
  const auto g = read_edge_list(p);
  g.require_connected("measure space");
  return MetricSpaceTable::from_graph(g);
}

int run_kr(const std::string &mu_path, const std::string &nu_path, const std::string &out,
           bool plan) {
  const auto mu_doc = parse_measure_json(read_file(mu_path));
  const auto nu_doc = parse_measure_json(read_file(nu_path));
  if (mu_doc.space_path != nu_doc.space_path)
    throw UsageError("measures refer to different spaces");
  const auto space = load_space(mu_doc, fs::path(mu_path).parent_path());
  for (const auto *doc : {&mu_doc, &nu_doc})
    for (int p : doc->measure.support())
      if (p >= space.size())
        throw UsageError("measure atom outside the space: " + std::to_string(p));
  std::ostringstream os;
  if (plan) {
    const auto tp = kr_plan(mu_doc.measure, nu_doc.measure, space);
    os << "source,sink,amount\n";
    for (const auto &f : tp.flows)
      os << mu_doc.measure.support()[f.source] << ',' << nu_doc.measure.support()[f.sink] << ','
         << format_double(f.amount) << '\n';
  } else {
    os << format_double(kr_distance(mu_doc.measure, nu_doc.measure, space)) << '\n';
  }
  emit(out, os.str());
  return 0;
}

// obstruct --------------------------------------------------------------------

struct ObstructArgs {
  std::string family = "margulis", target = "z2", sizes = "3..14", baseline = "spectral", out,
              plot;
  int degree = 4, iters = 300;
  std::uint64_t seed = 1;
};

int obstruct_threads() {
  int threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  if (const char *env = std::getenv("COARSE_OBSTRUCT_THREADS")) {
    try {
      threads = std::min(threads, std::max(1, std::stoi(env)));
    } catch (const std::exception &) {
      throw UsageError("COARSE_OBSTRUCT_THREADS must be an integer");
    }
  }
  return threads;
}

int run_obstruct(const ObstructArgs &a, bool seed_given) {
  if (a.target != "z2")
    throw UsageError("unsupported target: " + a.target + " (only z2)");
  const FamilyKind kind = family_from(a.family);
  BaselineStrategy baseline;
  try {
    baseline = parse_baseline(a.baseline);
  } catch (const std::invalid_argument &e) {
    throw UsageError(e.what());
  }
  if (!seed_given && (kind == FamilyKind::random_regular || baseline == BaselineStrategy::max_spread))
    throw UsageError("this family or baseline is randomized and needs --seed");
  const auto fam = make_family(kind, sizes_from(a.sizes), a.degree, a.seed);
  const auto report = obstruction_bound(fam, {baseline, a.iters, a.seed, obstruct_threads()});
  std::ostringstream csv;
  write_obstruction_csv(csv, report);
  emit(a.out, csv.str());
  if (!a.plot.empty()) {
    std::ostringstream dat;
    dat << "# n forced_fraction baseline_fraction witness_fraction\n";
    for (const auto &r : report.rows)
      dat << r.n << ' ' << format_double(r.forced_fraction) << ' '
          << format_double(r.baseline_fraction) << ' ' << format_double(r.witness_fraction) << '\n';
    write_file_atomic(a.plot, dat.str());
  }
  return report.witnesses_ok() ? 0 : kExitViolation;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"coarse-geom: expander certificates, embedding bounds, transport and "
               "displacement checks"};
  app.require_subcommand(1);
  int status = 0;

  // gen
  auto *gen = app.add_subcommand("gen", "Generate a graph as an edge list");
  gen->require_subcommand(1);
  GenArgs ga;
  auto *gen_m = gen->add_subcommand("margulis", "Margulis graph on (Z/n)^2");
  gen_m->add_option("--n", ga.n, "Side length")->required();
  gen_m->add_option("-o,--output", ga.out, "Edge-list path (stdout if omitted)");
  auto *gen_r = gen->add_subcommand("random-regular", "Random simple d-regular graph");
  gen_r->add_option("--n", ga.n, "Vertex count")->required();
  gen_r->add_option("--degree,-d", ga.degree, "Degree")->capture_default_str();
  auto *gen_r_seed = gen_r->add_option("--seed", ga.seed, "Random seed");
  gen_r->add_option("-o,--output", ga.out, "Edge-list path");
  auto *gen_c = gen->add_subcommand("cayley", "Cayley graph of a ball in a marked group");
  gen_c->add_option("--group", ga.group, "z2, zk, free, cyclic or sl2")->capture_default_str();
  gen_c->add_option("--radius", ga.radius, "Ball radius")->capture_default_str();
  gen_c->add_option("--rank", ga.rank, "Rank for zk and free")->capture_default_str();
  gen_c->add_option("--p", ga.p, "Prime for sl2")->capture_default_str();
  gen_c->add_option("--n", ga.n, "First factor order for cyclic");
  gen_c->add_option("--m", ga.m, "Second factor order for cyclic (defaults to n)");
  gen_c->add_option("-o,--output", ga.out, "Edge-list path");
  gen_c->add_option("--norms", ga.norms, "Norm-table CSV path");

  // spectral
  auto *spec = app.add_subcommand("spectral", "Spectral certificates as CSV");
  std::string spec_in, spec_out, spec_family, spec_sizes;
  int spec_degree = 4;
  std::uint64_t spec_seed = 0;
  bool spec_cheeger = false;
  spec->add_option("-i,--input", spec_in, "Edge-list path");
  spec->add_option("--family", spec_family, "margulis, random-regular or cycle");
  spec->add_option("--sizes", spec_sizes, "Sizes, e.g. 3..10 or 16,32,64");
  spec->add_option("--degree", spec_degree, "Degree for random-regular")->capture_default_str();
  auto *spec_seed_opt = spec->add_option("--seed", spec_seed, "Seed for random-regular");
  spec->add_flag("--cheeger", spec_cheeger, "Add exact h and the Cheeger check (n <= 20)");
  spec->add_option("-o,--output", spec_out, "CSV path");

  // verify
  auto *verify = app.add_subcommand("verify", "Run a verifier; exit 1 on any violation");
  verify->require_subcommand(1);
  InequalityArgs ia;
  auto *v_ineq = verify->add_subcommand("expander-inequalities",
                                        "Spectral, D_f and concentration bounds per member");
  v_ineq->add_option("--family", ia.family)->capture_default_str();
  v_ineq->add_option("--sizes", ia.sizes)->capture_default_str();
  v_ineq->add_option("--degree", ia.degree)->capture_default_str();
  v_ineq->add_option("--samples", ia.samples, "Random embeddings per member")->capture_default_str();
  v_ineq->add_option("--iters", ia.iters, "Optimizer iterations")->capture_default_str();
  auto *v_ineq_seed = v_ineq->add_option("--seed", ia.seed);
  v_ineq->add_option("-o,--output", ia.out);
  TransportArgs ta;
  auto *v_tr = verify->add_subcommand("transport-metric", "Metric axioms of the transport distance");
  v_tr->add_option("-i,--input", ta.input, "Edge-list path")->required();
  v_tr->add_option("--samples", ta.samples)->capture_default_str();
  auto *v_tr_seed = v_tr->add_option("--seed", ta.seed);
  v_tr->add_option("-o,--output", ta.out);
  DisplacementArgs da;
  auto *v_disp = verify->add_subcommand("displacement", "Displacement bound on Z^2");
  v_disp->add_option("--map", da.map, "identity, scaled or radial")->capture_default_str();
  v_disp->add_option("--scale", da.scale, "Factor for the scaled map")->capture_default_str();
  v_disp->add_option("--radius", da.radius, "Ball radius")->capture_default_str();
  v_disp->add_option("--r0", da.r0)->capture_default_str();
  v_disp->add_option("--epsilon", da.epsilon)->capture_default_str();
  v_disp->add_option("--samples", da.samples, "Spot checks")->capture_default_str();
  auto *v_disp_seed = v_disp->add_option("--seed", da.seed);
  v_disp->add_option("-o,--output", da.out);

  // embed
  auto *embed = app.add_subcommand("embed", "Embed a graph and write the coordinates CSV");
  embed->require_subcommand(1);
  std::string e_in, e_out, e_trace;
  int e_dim = 3, e_iters = 300;
  std::uint64_t e_seed = 0;
  auto *e_max = embed->add_subcommand("max-spread", "Max-spread 1-Lipschitz embedding");
  e_max->add_option("-i,--input", e_in)->required();
  e_max->add_option("--dim", e_dim)->capture_default_str();
  e_max->add_option("--iters", e_iters)->capture_default_str();
  auto *e_max_seed = e_max->add_option("--seed", e_seed);
  e_max->add_option("-o,--output", e_out);
  e_max->add_option("--trace", e_trace, "Objective trace (iteration value per line)");
  auto *e_spec = embed->add_subcommand("spectral", "Bottom Laplacian eigenvectors");
  e_spec->add_option("-i,--input", e_in)->required();
  e_spec->add_option("--dim", e_dim)->capture_default_str();
  e_spec->add_option("-o,--output", e_out);

  // transport
  auto *tr = app.add_subcommand("transport", "Transport between measures");
  tr->require_subcommand(1);
  std::string kr_mu, kr_nu, kr_out;
  bool kr_plan_flag = false;
  auto *tr_kr = tr->add_subcommand("kr", "Kantorovich-Rubinstein distance");
  tr_kr->add_option("--mu", kr_mu, "Measure JSON")->required();
  tr_kr->add_option("--nu", kr_nu, "Measure JSON")->required();
  tr_kr->add_flag("--plan", kr_plan_flag, "Write the optimal plan instead of the value");
  tr_kr->add_option("-o,--output", kr_out);

  // obstruct
  ObstructArgs oa;
  auto *obs = app.add_subcommand("obstruct", "Obstruction report for a graph family");
  obs->add_option("--family", oa.family)->capture_default_str();
  obs->add_option("--target", oa.target)->capture_default_str();
  obs->add_option("--sizes", oa.sizes)->capture_default_str();
  obs->add_option("--degree", oa.degree)->capture_default_str();
  obs->add_option("--baseline", oa.baseline, "spectral or max-spread")->capture_default_str();
  obs->add_option("--iters", oa.iters)->capture_default_str();
  auto *obs_seed = obs->add_option("--seed", oa.seed);
  obs->add_option("-o,--output", oa.out);
  obs->add_option("--plot", oa.plot, "Whitespace-separated data columns for plotting");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (gen->parsed()) {
      require_output(ga.out);
      std::ostringstream os;
      if (gen_m->parsed()) {
        write_edge_list(os, margulis_graph(ga.n));
      } else if (gen_r->parsed()) {
        require_seed(gen_r_seed, "gen random-regular");
        write_edge_list(os, random_regular(ga.n, ga.degree, ga.seed));
      } else {
        require_output(ga.norms);
        const auto ball = cayley_ball(group_from(ga), ga.radius);
        write_edge_list(os, ball.graph());
        if (!ga.norms.empty())
          write_file_atomic(ga.norms, norm_table_csv(ball));
      }
      emit(ga.out, os.str());
    } else if (spec->parsed()) {
      require_output(spec_out);
      std::vector<FiniteGraph> graphs;
      if (!spec_in.empty()) {
        require_input(spec_in);
        graphs.push_back(read_edge_list(fs::path(spec_in)));
      } else if (!spec_family.empty() && !spec_sizes.empty()) {
        const FamilyKind kind = family_from(spec_family);
        if (kind == FamilyKind::random_regular)
          require_seed(spec_seed_opt, "a random-regular family");
        graphs = make_family(kind, sizes_from(spec_sizes), spec_degree, spec_seed).members;
      } else {
        throw UsageError("spectral needs --input or --family with --sizes");
      }
      std::ostringstream csv;
      write_certificate_csv_header(csv);
      for (const auto &g : graphs) {
        std::optional<Rational> h;
        if (spec_cheeger && g.vertex_count() <= kExhaustiveCheegerLimit) {
          const auto ch = cheeger_crosscheck(g);
          h = ch.h_exact;
          if (!ch.bounds_ok)
            status = kExitViolation;
        }
        write_certificate_csv_row(csv, g, lambda1(g), h);
      }
      emit(spec_out, csv.str());
    } else if (verify->parsed()) {
      if (v_ineq->parsed()) {
        require_output(ia.out);
        require_seed(v_ineq_seed, "verify expander-inequalities");
        status = run_inequalities(ia);
      } else if (v_tr->parsed()) {
        require_input(ta.input);
        require_output(ta.out);
        require_seed(v_tr_seed, "verify transport-metric");
        status = run_transport_metric(ta);
      } else {
        require_output(da.out);
        if (da.map != "radial")
          require_seed(v_disp_seed, "verify displacement");
        status = run_displacement(da);
      }
    } else if (embed->parsed()) {
      require_input(e_in);
      require_output(e_out);
      require_output(e_trace);
      const auto g = read_edge_list(fs::path(e_in));
      std::ostringstream os;
      if (e_max->parsed()) {
        require_seed(e_max_seed, "embed max-spread");
        const auto res = max_spread_embedding(g, e_dim, e_iters, e_seed);
        write_embedding_csv(os, res.embedding);
        if (!e_trace.empty()) {
          std::ostringstream tr_os;
          for (std::size_t i = 0; i < res.trace.size(); ++i)
            tr_os << i << ' ' << format_double(res.trace[i]) << '\n';
          write_file_atomic(e_trace, tr_os.str());
        }
      } else {
        write_embedding_csv(os, spectral_embedding(g, e_dim));
      }
      emit(e_out, os.str());
    } else if (tr->parsed()) {
      require_input(kr_mu);
      require_input(kr_nu);
      require_output(kr_out);
      status = run_kr(kr_mu, kr_nu, kr_out, kr_plan_flag);
    } else if (obs->parsed()) {
      require_output(oa.out);
      require_output(oa.plot);
      status = run_obstruct(oa, obs_seed->count() > 0);
    }
  } catch (const UsageError &e) {
    std::cerr << "coarse-geom: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument &e) {
    std::cerr << "coarse-geom: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::out_of_range &e) {
    std::cerr << "coarse-geom: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::length_error &e) {
    std::cerr << "coarse-geom: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::logic_error &e) {
    std::cerr << "coarse-geom: invariant violated: " << e.what() << '\n';
    return kExitViolation;
  } catch (const std::runtime_error &e) {
    std::cerr << "coarse-geom: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception &e) {
    std::cerr << "coarse-geom: internal error: " << e.what() << '\n';
    return kExitUsage;
  }
  return status;
}
