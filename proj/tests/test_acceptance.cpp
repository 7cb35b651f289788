// End-to-end acceptance checks.  Each test case exercises one release
// property over a generated corpus, prints a single summary line
// ("CRITERION k: PASS/FAIL — ...") and fails the build when the property
// does not hold exactly.
#include <catch2/catch_amalgamated.hpp>

#include <omalg/algebra.hpp>
#include <omalg/cli.hpp>
#include <omalg/document.hpp>
#include <omalg/generation.hpp>
#include <omalg/oracle.hpp>
#include <omalg/representation.hpp>
#include <omalg/tower.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

#include "corpus.hpp"

using namespace omalg;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void fail(const std::string& why) {
    if (pass) detail.str("");  // first failure replaces the running summary
    pass = false;
    detail << (detail.str().empty() ? "" : "; ") << why;
  }
};

void conclude(int k, Outcome& o) {
  std::cout << "CRITERION " << k << (o.pass ? ": PASS — " : ": FAIL — ")
            << o.detail.str() << std::endl;
  REQUIRE(o.pass);
}

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  long long ms() const {
    return std::chrono::duration_cast<std::chrono::milliseconds>(
               std::chrono::steady_clock::now() - start)
        .count();
  }
};

std::vector<Elt> random_nonempty_subset(std::size_t n, std::mt19937& rng) {
  std::vector<Elt> x;
  for (Elt e = 0; e < n; ++e)
    if (rng() % 2) x.push_back(e);
  if (x.empty()) x.push_back(rng() % n);
  return x;
}

// generates and removal of any single element breaks generation
bool passes_basis_criterion(const Representation& r, const std::vector<Elt>& b) {
  if (!is_generating(r, b)) return false;
  for (std::size_t k = 0; k < b.size(); ++k) {
    std::vector<Elt> reduced = b;
    reduced.erase(reduced.begin() + static_cast<std::ptrdiff_t>(k));
    if (is_generating(r, reduced)) return false;
  }
  return true;
}

bool passes_tower_basis_criterion(const Tower& t, const GeneratingTuple& gt) {
  if (!is_generating_tuple(t, gt)) return false;
  for (std::size_t j = 0; j < gt.sets.size(); ++j)
    for (std::size_t k = 0; k < gt.sets[j].size(); ++k) {
      GeneratingTuple reduced = gt;
      reduced.sets[j].erase(reduced.sets[j].begin() +
                            static_cast<std::ptrdiff_t>(k));
      if (is_generating_tuple(t, reduced)) return false;
    }
  return true;
}

// The automorphism sets are shared between the basis-image and loop-axiom
// checks; enumerate them once.
struct LoopBank {
  std::vector<std::pair<Representation, AutomorphismLoop>> reps;
  std::vector<std::pair<Tower, TowerAutomorphismLoop>> towers;
};

const LoopBank& loop_bank() {
  static const LoopBank bank = [] {
    LoopBank b;
    for (const Representation& r : corpus::representation_corpus()) {
      AutomorphismLoop loop = automorphism_loop(r, Budget{200'000'000});
      b.reps.emplace_back(r, std::move(loop));
    }
    std::vector<Tower> towers;
    towers.push_back(Tower{{corpus::translation_rep(4)}});
    towers.push_back(corpus::translation_tower(2, 3));
    towers.push_back(corpus::translation_tower(3, 3));
    towers.push_back(corpus::translation_tower(4, 3));
    towers.push_back(corpus::translation_tower(2, 4));
    towers.push_back(corpus::translation_tower(3, 4));
    std::mt19937 rng(909);
    for (int i = 0; i < 3; ++i)
      towers.push_back(corpus::random_tau_tower(rng, 2 + rng() % 2, 3));
    towers.push_back(corpus::gf_tower());
    for (Tower& t : towers) {
      TowerAutomorphismLoop loop = tower_automorphism_loop(t, Budget{200'000'000});
      b.towers.emplace_back(std::move(t), std::move(loop));
    }
    return b;
  }();
  return bank;
}

std::string scratch(const std::string& name, const std::string& content) {
  std::filesystem::path dir =
      std::filesystem::temp_directory_path() / "omalg-acceptance";
  std::filesystem::create_directories(dir);
  std::filesystem::path p = dir / name;
  std::ofstream f(p, std::ios::trunc);
  f << content;
  return p.string();
}

int cli_code(std::vector<std::string> args) {
  std::ostringstream out, err;
  return run_cli(args, out, err);
}

}  // namespace

TEST_CASE("criterion 1: fixpoint closure equals the exhaustive oracle") {
  Outcome o;
  Timer timer;
  std::size_t instances = 0, elements = 0;
  try {
    std::mt19937 rng(611);
    std::vector<Representation> reps;
    for (int i = 0; i < 70; ++i) reps.push_back(corpus::random_plain_rep(rng));
    for (std::size_t n : {2, 3, 4}) reps.push_back(corpus::translation_rep(n));
    for (const Representation& r : reps) {
      // instance bounds: small domain and space, at most two short operations
      if (r.domain.size > 4 || r.space.size > 6 || r.space.sig.ops.size() > 2)
        o.fail("generated instance exceeds the intended size bounds");
      for (const Op& op : r.space.sig.ops)
        if (op.arity > 2) o.fail("operation arity above 2 in an instance");
      for (int k = 0; k < 3; ++k) {
        std::vector<Elt> x = random_nonempty_subset(r.space.size, rng);
        std::vector<Elt> fast = stable_closure(r, x).elements;
        std::vector<Elt> slow = brute_closure(r, x);
        ++instances;
        elements += fast.size();
        if (fast != slow) {
          std::ostringstream w;
          w << "closure mismatch on instance " << instances << " with seed set "
            << show_tuple(x);
          o.fail(w.str());
        }
      }
    }
    if (instances < 200) o.fail("fewer than 200 generated instances");
    if (timer.ms() >= 60'000) o.fail("closure comparison exceeded 60 s");
    if (o.pass)
      o.detail << instances << " generated instances agree with the exhaustive "
               << "oracle (" << elements << " closure elements, " << timer.ms()
               << " ms)";
  } catch (const std::exception& e) {
    o.fail(std::string("unexpected exception: ") + e.what());
  }
  conclude(1, o);
}

TEST_CASE("criterion 2: derived skip actions satisfy their defining law") {
  Outcome o;
  try {
    std::mt19937 rng(2026);
    std::size_t towers = 0, holders = 0, pairs = 0;
    for (int n = 0; n < 120; ++n) {
      Tower t = corpus::glued_tower(rng, n % 2 == 0);
      ++towers;
      SkipResult sk = derive_skip(t, 1);
      if (!sk.report.ok()) continue;  // construction precondition failed
      ++holders;
      const Representation& f12 = t.reps[0];
      const Representation& f23 = t.reps[1];
      // the action of a on the class of s is the class of (a applied to s)
      for (Elt a = 0; a < f12.domain.size; ++a)
        for (Elt s = 0; s < f23.domain.size; ++s) {
          ++pairs;
          if (sk.rep.actions[a](sk.image_of[s]) !=
              sk.image_of[f12.actions[a](s)]) {
            std::ostringstream w;
            w << "law fails on tower " << towers << " at a=" << a << " s=" << s;
            o.fail(w.str());
          }
        }
      if (!check_id_projection_morphism(t, 1).ok()) {
        std::ostringstream w;
        w << "class projection is not a morphism on tower " << towers;
        o.fail(w.str());
      }
    }
    if (holders < 100) o.fail("fewer than 100 towers satisfied the precondition");
    if (o.pass)
      o.detail << holders << "/" << towers
               << " three-layer towers: the derived action law holds on all "
               << pairs << " (a, s) pairs and the class projection is a "
               << "morphism every time";
  } catch (const std::exception& e) {
    o.fail(std::string("unexpected exception: ") + e.what());
  }
  conclude(2, o);
}

TEST_CASE("criterion 3: effectiveness propagates to skip and extended actions") {
  Outcome o;
  try {
    std::size_t towers = 0, skips = 0, extensions = 0, chains = 0;
    for (const Tower& t : corpus::effective_tower_corpus()) {
      ++towers;
      for (const Representation& r : t.reps)
        if (!is_effective(r)) o.fail("corpus tower has an ineffective layer");
      for (std::size_t i = 1; i + 2 <= t.layers(); ++i) {
        SkipResult sk = derive_skip(t, i);
        ++skips;
        if (!sk.report.ok()) o.fail("skip construction failed on an effective tower");
        if (!is_effective(sk.rep)) {
          std::ostringstream w;
          w << "derived skip action at layer " << i << " of tower " << towers
            << " is not effective";
          o.fail(w.str());
        }
        try {
          ExtendResult ext = extend_skip_to_carrier(t, i);
          ++extensions;
          if (!is_effective(ext.rep)) {
            std::ostringstream w;
            w << "extended action at layer " << i << " of tower " << towers
              << " is not effective";
            o.fail(w.str());
          }
        } catch (const precondition_error&) {
          // extension undefined here (identity not in the middle image)
        }
      }
      for (std::size_t i = 1; i + 2 <= t.layers(); ++i)
        for (std::size_t k = 2; i + k <= t.layers(); ++k) {
          ++chains;
          if (!check_effectiveness_propagation(t, i, k)) {
            std::ostringstream w;
            w << "propagation check fails on tower " << towers << " at (i=" << i
              << ", k=" << k << ")";
            o.fail(w.str());
          }
        }
    }
    if (o.pass)
      o.detail << towers << " all-effective towers: every derived skip action ("
               << skips << ") and every defined extension (" << extensions
               << ") is effective; layered propagation holds on all " << chains
               << " (i, k) chains";
  } catch (const std::exception& e) {
    o.fail(std::string("unexpected exception: ") + e.what());
  }
  conclude(3, o);
}

TEST_CASE("criterion 4: every found morphism factors exactly") {
  Outcome o;
  try {
    std::mt19937 rng(5077);
    std::vector<Representation> smalls;
    for (std::size_t n : {2, 3, 4}) smalls.push_back(corpus::translation_rep(n));
    // a collapsing action and a rotation on plain sets
    Representation collapse;
    collapse.domain = corpus::plain_set(2);
    collapse.space = corpus::plain_set(3);
    collapse.interp = Interp{false, false, {}};
    collapse.actions = {Mapping{3, 3, {1, 1, 2}}, Mapping::identity(3)};
    Representation rotation;
    rotation.domain = corpus::plain_set(1);
    rotation.space = corpus::plain_set(3);
    rotation.interp = Interp{false, false, {}};
    rotation.actions = {Mapping{3, 3, {1, 2, 0}}};
    std::vector<std::pair<const Representation*, const Representation*>> pairs;
    for (const Representation& a : smalls)
      for (const Representation& b : smalls) pairs.emplace_back(&a, &b);
    pairs.emplace_back(&collapse, &collapse);
    pairs.emplace_back(&rotation, &rotation);
    std::vector<Representation> randoms;
    for (int i = 0; i < 6; ++i)
      randoms.push_back(corpus::random_plain_rep(rng, 4, 4));
    for (const Representation& r : randoms) pairs.emplace_back(&r, &r);

    std::size_t found = 0;
    for (auto [src, dst] : pairs) {
      if (src->domain.size > 4 || src->space.size > 4 || dst->domain.size > 4 ||
          dst->space.size > 4)
        o.fail("search instance exceeds the intended size bounds");
      for (const RepMorphism& m :
           exhaustive_morphism_search(*src, *dst, Budget{50'000'000})) {
        ++found;
        Decomposition d = decompose_morphism(m, *src, *dst);
        if (!d.report.ok()) o.fail("decomposition reported a problem");
        for (Elt x = 0; x < src->domain.size; ++x)
          if (m.dom(x) != d.dom_incl(d.dom_bij(d.dom_proj(x))))
            o.fail("domain map differs from projection-bijection-inclusion");
        for (Elt x = 0; x < src->space.size; ++x)
          if (m.spc(x) != d.spc_incl(d.spc_bij(d.spc_proj(x))))
            o.fail("space map differs from projection-bijection-inclusion");
        if (!d.dom_bij.is_bijection() || !d.spc_bij.is_bijection())
          o.fail("middle factor is not bijective");
        RepMorphism proj{d.dom_proj, d.spc_proj};
        RepMorphism mid{d.dom_bij, d.spc_bij};
        RepMorphism inv{d.dom_bij.inverse(), d.spc_bij.inverse()};
        RepMorphism incl{d.dom_incl, d.spc_incl};
        if (!validate_morphism(proj, *src, d.quotient_rep).ok())
          o.fail("projection pair fails morphism validation");
        if (!validate_morphism(mid, d.quotient_rep, d.image_rep).ok())
          o.fail("bijection pair fails morphism validation");
        if (!validate_morphism(inv, d.image_rep, d.quotient_rep).ok())
          o.fail("inverse bijection pair fails morphism validation");
        if (!validate_morphism(incl, d.image_rep, *dst).ok())
          o.fail("inclusion pair fails morphism validation");
      }
    }
    if (found == 0) o.fail("exhaustive search found no morphisms at all");
    if (o.pass)
      o.detail << found << " morphisms found across " << pairs.size()
               << " instance pairs; every one factors exactly as "
               << "projection, bijection, inclusion, with all four factor "
               << "pairs validating";
  } catch (const std::exception& e) {
    o.fail(std::string("unexpected exception: ") + e.what());
  }
  conclude(4, o);
}

TEST_CASE("criterion 5: coordinate words evaluate back to their elements") {
  Outcome o;
  try {
    std::size_t checked = 0;
    for (const Representation& r : corpus::representation_corpus()) {
      std::vector<std::vector<Elt>> seeds{find_basis(r), {0}};
      for (const std::vector<Elt>& x : seeds) {
        StableClosure c = stable_closure(r, x);
        for (const auto& [e, w] : c.coords.words) {
          ++checked;
          if (evaluate_word(r, x, w) != e)
            o.fail("a closure word evaluates to the wrong element");
        }
      }
    }
    for (const Tower& t : corpus::effective_tower_corpus()) {
      GeneratingTuple gt = find_tower_basis(t);
      TowerClosure c = tower_closure(t, gt);
      for (std::size_t i = 0; i < c.words.size(); ++i)
        for (const auto& [e, w] : c.words[i]) {
          ++checked;
          if (evaluate_word(t, gt, w) != e)
            o.fail("a tower closure word evaluates to the wrong element");
        }
    }
    // the stored generating set of the worked three-layer fixture
    Document doc = corpus::load_fixture("gf_tower.om");
    const Tower& gf = doc.tower("gf")->tower;
    const DocGenset* gens = Document::find_in(doc.gensets, "gens");
    if (gens == nullptr) {
      o.fail("fixture generating set is missing");
    } else {
      GeneratingTuple gt;
      for (std::size_t layer = 2; layer <= gf.layers(); ++layer)
        gt.sets.push_back(gens->layers.at(layer));
      TowerClosure c = tower_closure(gf, gt);
      for (std::size_t i = 0; i < c.words.size(); ++i)
        for (const auto& [e, w] : c.words[i]) {
          ++checked;
          if (evaluate_word(gf, gt, w) != e)
            o.fail("a fixture closure word evaluates to the wrong element");
        }
    }
    if (o.pass)
      o.detail << checked
               << " generated elements re-evaluated from their coordinate "
               << "words with no mismatch";
  } catch (const std::exception& e) {
    o.fail(std::string("unexpected exception: ") + e.what());
  }
  conclude(5, o);
}

TEST_CASE("criterion 6: bases are minimal and automorphisms map bases to bases") {
  Outcome o;
  try {
    std::size_t bases = 0, images = 0;
    for (const auto& [r, loop] : loop_bank().reps) {
      std::vector<Elt> b = find_basis(r);
      ++bases;
      if (!passes_basis_criterion(r, b))
        o.fail("a computed basis fails the minimal-generation criterion");
      for (const RepMorphism& m : loop.members) {
        std::vector<Elt> image;
        for (Elt x : b) image.push_back(m.spc(x));
        std::sort(image.begin(), image.end());
        ++images;
        if (!passes_basis_criterion(r, image))
          o.fail("an automorphism image of a basis fails the criterion");
      }
    }
    for (const Tower& t : corpus::effective_tower_corpus()) {
      ++bases;
      if (!passes_tower_basis_criterion(t, find_tower_basis(t)))
        o.fail("a computed tower basis fails the minimal-generation criterion");
    }
    for (const auto& [t, loop] : loop_bank().towers) {
      GeneratingTuple b = find_tower_basis(t);
      ++bases;
      if (!passes_tower_basis_criterion(t, b))
        o.fail("a computed tower basis fails the minimal-generation criterion");
      for (const TowerMorphism& m : loop.members) {
        GeneratingTuple image;
        for (std::size_t j = 0; j < b.sets.size(); ++j) {
          std::vector<Elt> s;
          for (Elt x : b.sets[j]) s.push_back(m.maps[j + 1](x));
          std::sort(s.begin(), s.end());
          image.sets.push_back(std::move(s));
        }
        ++images;
        if (!passes_tower_basis_criterion(t, image))
          o.fail("an automorphism image of a tower basis fails the criterion");
      }
    }
    if (o.pass)
      o.detail << bases << " computed bases are minimal generating sets, and "
               << "all " << images
               << " automorphism images of stored bases pass the same "
               << "criterion";
  } catch (const std::exception& e) {
    o.fail(std::string("unexpected exception: ") + e.what());
  }
  conclude(6, o);
}

TEST_CASE("criterion 7: automorphism sets satisfy the loop axioms") {
  Outcome o;
  try {
    std::size_t loops = 0, members = 0, full = 0, sampled = 0;
    bool all_associative = true;
    auto take = [&](const LoopReport& rep, std::size_t size) {
      ++loops;
      members += size;
      if (!rep.identity_present) o.fail("identity missing from a loop");
      if (!rep.closed) o.fail("a loop is not closed under composition");
      if (!rep.inverses) o.fail("a loop member lacks an inverse");
      if (!rep.left_division_unique) o.fail("left division is not unique");
      if (!rep.right_division_unique) o.fail("right division is not unique");
      if (rep.associativity_checked == "full")
        ++full;
      else
        ++sampled;
      all_associative = all_associative && rep.associative;
    };
    for (const auto& [r, loop] : loop_bank().reps)
      take(loop.report, loop.members.size());
    for (const auto& [t, loop] : loop_bank().towers)
      take(loop.report, loop.members.size());
    if (o.pass)
      o.detail << loops << " automorphism sets (" << members
               << " members in total) satisfy every loop axiom; composition "
               << "was observed associative in all of them (" << full
               << " checked in full, " << sampled << " sampled)";
    if (!all_associative)
      o.detail << "; note: at least one set was observed non-associative";
  } catch (const std::exception& e) {
    o.fail(std::string("unexpected exception: ") + e.what());
  }
  conclude(7, o);
}

TEST_CASE("criterion 8: the worked field tower has the expected coordinates") {
  Outcome o;
  Timer timer;
  try {
    Document doc = corpus::load_fixture("gf_tower.om");
    DocumentProblems problems = validate_document(doc);
    if (!problems.ok()) o.fail("the field tower fixture does not validate");
    const DocTower* dt = doc.tower("gf");
    if (dt == nullptr) throw precondition_error("fixture tower is missing");
    const Tower& t = dt->tower;

    GeneratingTuple basis = find_tower_basis(t);
    if (basis.sets.size() != 2 || basis.sets[0].size() != 1 ||
        basis.sets[1].size() != 2)
      o.fail("tower basis sizes differ from (1, 2)");

    // Independent oracle: the four products b_i(e_j) — scalars b_i from a
    // two-element additive basis of the middle layer, e_j from the computed
    // top-layer basis — must produce all 16 top elements as distinct subset
    // sums, i.e. every top element has a unique 2x2 bit matrix of
    // bottom-layer coordinates.
    const FiniteAlgebra& middle = t.layer(2);
    const FiniteAlgebra& top = t.layer(3);
    std::vector<Elt> scalars{1, 2};  // the unit and one generator of the middle
    std::set<Elt> middle_sums;
    for (unsigned mask = 0; mask < 4; ++mask) {
      Elt sum = middle.apply("zero", {});
      for (unsigned i = 0; i < 2; ++i)
        if (mask >> i & 1) sum = middle.apply("add", {sum, scalars[i]});
      middle_sums.insert(sum);
    }
    if (middle_sums.size() != middle.size)
      o.fail("the two chosen scalars do not span the middle layer");

    const Representation& f23 = t.reps[1];
    std::vector<Elt> products;
    for (Elt b : scalars)
      for (Elt e : basis.sets[1]) products.push_back(f23.actions[b](e));
    std::set<Elt> sums;
    std::size_t coordinates = products.size();
    for (unsigned mask = 0; mask < (1u << coordinates); ++mask) {
      Elt sum = top.apply("zero", {});
      for (unsigned i = 0; i < coordinates; ++i)
        if (mask >> i & 1) sum = top.apply("add", {sum, products[i]});
      sums.insert(sum);
    }
    if (coordinates != 4) o.fail("expected exactly 2 x 2 basis products");
    if (sums.size() != 16u)
      o.fail("subset sums of the basis products collide, coordinates are not "
             "independent");
    if (sums.size() == 16u && *sums.rbegin() != 15u)
      o.fail("subset sums do not cover the top layer");
    if (timer.ms() >= 1000) o.fail("worked instance took 1 s or longer");
    if (o.pass)
      o.detail << "tower basis sizes (1, 2); all 16 top elements are distinct "
               << "subset sums of the 2 x 2 basis products, so each has a "
               << "unique vector of 4 bottom-layer coordinates (" << timer.ms()
               << " ms)";
  } catch (const std::exception& e) {
    o.fail(std::string("unexpected exception: ") + e.what());
  }
  conclude(8, o);
}

TEST_CASE("criterion 9: canonical round-trips and the exit-code matrix") {
  Outcome o;
  try {
    std::size_t round_trips = 0;
    for (const std::string& name : corpus::fixture_names()) {
      std::string text = corpus::read_file(corpus::fixture_path(name));
      if (serialize_document(parse_document(text)) != text) {
        o.fail("fixture " + name + " does not round-trip byte-identical");
      } else {
        ++round_trips;
      }
    }

    std::string z3 = corpus::fixture_path("z3_translation.om");
    std::string gf = corpus::fixture_path("gf_tower.om");
    std::string z3text = corpus::read_file(z3);
    std::string lawbroken = z3text;
    lawbroken.replace(lawbroken.find("  act 1 1 2 0"), 13, "  act 1 0 1 2");
    const char* no_identity =
        "signature bare\nend\n"
        "algebra l1 bare\n  elements u\nend\n"
        "algebra l2 bare\n  elements s\nend\n"
        "algebra l3 bare\n  elements 0 1\nend\n"
        "interp free bare bare\nend\n"
        "representation f12 l1 l2 free\n  act u s\nend\n"
        "representation f23 l2 l3 free\n  act s 1 0\nend\n"
        "tower t\n  rep f12\n  rep f23\nend\n";
    const char* ill_defined =
        "signature bare\nend\n"
        "algebra l1 bare\n  elements u0 u1\nend\n"
        "algebra l2 bare\n  elements e ep s\nend\n"
        "algebra l3 bare\n  elements 0 1\nend\n"
        "interp free bare bare\nend\n"
        "representation f12 l1 l2 free\n  act u0 e ep s\n  act u1 e s s\nend\n"
        "representation f23 l2 l3 free\n  act e 0 1\n  act ep 0 1\n  act s 1 0\nend\n"
        "tower t\n  rep f12\n  rep f23\nend\n";

    struct Case {
      std::vector<std::string> args;
      int expected;
    };
    std::vector<Case> matrix{
        // well-formed inputs succeed
        {{"validate", gf}, 0},
        {{"--help"}, 0},
        // operational errors
        {{"validate", scratch("missing-dir", "x") + "/nowhere.om"}, 1},
        {{"validate", scratch("syntax.om", "junk directive\n")}, 1},
        {{"closure", z3, "--object", "nosuch"}, 1},
        {{"frobnicate", z3}, 1},
        {{"derive", gf, "--layer", "9"}, 1},
        {{"closure", z3, "--budget", "plenty"}, 1},
        // validation failures carry witnesses and exit 2
        {{"validate", scratch("truncated.om",
                              "signature s\n  op add 2\nend\n"
                              "algebra a s\n  elements 0 1\n  table add 0 1 1\n"
                              "end\n")},
         2},
        {{"validate", scratch("nonendo.om",
                              "signature add2\n  op add 2\nend\n"
                              "signature bare\nend\n"
                              "algebra e1 bare\n  elements e\nend\n"
                              "algebra z3 add2\n  elements 0 1 2\n"
                              "  table add 0 1 2 1 2 0 2 0 1\nend\n"
                              "interp free bare add2\nend\n"
                              "representation r e1 z3 free\n  act e 0 0 1\nend\n")},
         2},
        {{"validate", scratch("badlaw.om", lawbroken)}, 2},
        {{"morphism-check",
          scratch("badmor.om", z3text + "\nmorphism bad z3t z3t\n  dom 0 2 1\n"
                                        "  spc 0 1 2\nend\n")},
         2},
        {{"closure", scratch("gate.om", lawbroken)}, 2},
        // structural failures of derived constructions exit 3
        {{"derive", scratch("illdefined.om", ill_defined), "--layer", "1"}, 3},
        {{"extend", scratch("noidentity.om", no_identity), "--layer", "1"}, 3},
    };
    std::size_t malformed = 0;
    for (const Case& c : matrix) {
      int got = cli_code(c.args);
      if (got != c.expected) {
        std::ostringstream w;
        w << "command '" << c.args[0] << "' exited " << got << " instead of "
          << c.expected;
        o.fail(w.str());
      }
      if (c.expected != 0) ++malformed;
    }
    if (malformed < 10) o.fail("fewer than 10 malformed-input cases");
    if (o.pass)
      o.detail << round_trips << " fixtures round-trip byte-identical; all "
               << matrix.size() << " exit-code cases (" << malformed
               << " malformed) honored the documented codes";
  } catch (const std::exception& e) {
    o.fail(std::string("unexpected exception: ") + e.what());
  }
  conclude(9, o);
}
