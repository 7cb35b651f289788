#include <catch2/catch_amalgamated.hpp>

#include "corpus.hpp"

using namespace omalg;

namespace {

std::string joined(const DocumentProblems& p) {
  std::string s;
  for (const auto& [obj, prob] : p.items) s += obj + ": " + prob + "\n";
  return s;
}

const char* kSmallDoc = R"(# translations of Z3 on a bare 3-set
signature addsig
  op add 2
end

signature bare
end

algebra s3 bare
  elements 0 1 2
end

algebra z3 addsig
  elements 0 1 2
  table add 0 1 2 1 2 0 2 0 1
end

interp trans addsig bare
  map add compose
end

representation z3t z3 s3 trans
  act 0 0 1 2
  act 1 1 2 0
  act 2 2 0 1
end

genset gens z3t
  layer 2 0
end

word w1 gens act(const(1), gen(2, 0))
)";

}  // namespace

TEST_CASE("fixtures round-trip byte for byte") {
  for (const auto& name : corpus::fixture_names()) {
    std::string text = corpus::read_file(corpus::fixture_path(name));
    Document doc = parse_document(text);
    CAPTURE(name);
    REQUIRE(serialize_document(doc) == text);
    REQUIRE(validate_document(doc).ok());
  }
}

TEST_CASE("serialization canonicalizes order, spacing and comments away") {
  // same content as kSmallDoc, scrambled: odd spacing, comments, block order
  std::string scrambled =
      "signature   bare\nend\n"
      "# comment\n\n"
      "signature addsig\n   op add 2\nend\n"
      "algebra z3 addsig\n  elements 0 1 2\n"
      "  table add 0 1 2 1 2 0 2 0 1\nend\n"
      "algebra s3 bare\n  elements 0 1 2\nend\n\n\n"
      "interp trans addsig bare\n  map add compose\nend\n"
      "representation z3t z3 s3 trans\n"
      "  act 2 2 0 1\n  act 0 0 1 2\n  act 1 1 2 0\nend\n"
      "genset gens z3t\n  layer 2 0\nend\n"
      "word w1 gens act( const(1),gen(2,0) )\n";
  std::string canon = serialize_document(parse_document(scrambled));
  REQUIRE(canon == serialize_document(parse_document(kSmallDoc)));
  SECTION("canonical output is a fixed point") {
    REQUIRE(serialize_document(parse_document(canon)) == canon);
  }
}

TEST_CASE("parse errors carry line numbers") {
  auto line_of = [](const std::string& text) -> std::size_t {
    try {
      parse_document(text);
    } catch (const parse_error& e) {
      return e.line;
    }
    return 0;
  };

  SECTION("unknown directive") {
    REQUIRE(line_of("foo bar\n") == 1);
  }
  SECTION("unknown referenced name") {
    REQUIRE(line_of("algebra a nosig\n  elements x\nend\n") == 1);
  }
  SECTION("declarations must precede use") {
    std::string text =
        "representation r a a i\nend\n"
        "signature s\nend\n";
    REQUIRE(line_of(text) == 1);
  }
  SECTION("duplicate names are rejected across object kinds") {
    REQUIRE(line_of("signature s\nend\nsignature s\nend\n") == 3);
    REQUIRE(line_of("signature s\nend\nalgebra s s\n  elements x\nend\n") == 3);
  }
  SECTION("duplicate element names") {
    REQUIRE(line_of("signature s\nend\nalgebra a s\n  elements x x\nend\n") == 4);
  }
  SECTION("duplicate act line") {
    std::string text = std::string(kSmallDoc);
    text.replace(text.find("  act 1 1 2 0"), 13, "  act 0 0 1 2");
    REQUIRE(line_of(text) != 0);
  }
  SECTION("unterminated block") {
    REQUIRE(line_of("signature s\n  op u 1\n") != 0);
  }
  SECTION("unknown element name in a body line") {
    REQUIRE(line_of("signature s\nend\nalgebra a s\n  elements x\nend\n"
                    "interp i s s\nend\n"
                    "representation r a a i\n  act x y\nend\n") == 9);
  }
}

TEST_CASE("word terms parse with layer inference and qualifiers") {
  Document doc = parse_document(corpus::read_file(corpus::fixture_path("gf_tower.om")));
  Tower gf = doc.tower("gf")->tower;
  GeneratingTuple gt = doc.genset_tuple(*doc.genset("gens"));

  SECTION("the fixture word mixes act and op across layers") {
    const DocWord* w = doc.word("mix");
    REQUIRE(w != nullptr);
    REQUIRE(evaluate_word(gf, gt, w->word) == 6);  // the vector named 12
  }
  SECTION("nullary operations need a layer qualifier when ambiguous") {
    std::string text = corpus::read_file(corpus::fixture_path("gf_tower.om"));
    // 'zero' exists on both the scalar and the vector layer
    REQUIRE_THROWS_AS(parse_document(text + "\nword z gens op(zero)\n"), parse_error);
    Document d2 = parse_document(text + "\nword z gens op@2(zero)\n");
    REQUIRE(evaluate_word(gf, gt, d2.word("z")->word) == 0);  // the scalar 0
    Document d3 = parse_document(text + "\nword z gens op@3(zero)\n");
    REQUIRE(evaluate_word(gf, gt, d3.word("z")->word) == 0);  // the vector 00
    REQUIRE(d3.word("z")->word.layer == 3);
  }
  SECTION("qualified nullary words serialize back in qualified form") {
    std::string text = corpus::read_file(corpus::fixture_path("gf_tower.om"));
    Document d = parse_document(text + "\nword z gens op@3(zero)\n");
    REQUIRE_THAT(serialize_document(d),
                 Catch::Matchers::ContainsSubstring("word z gens op@3(zero)"));
  }
  SECTION("binary operation layers are inferred from the children") {
    std::string text = corpus::read_file(corpus::fixture_path("gf_tower.om"));
    Document d = parse_document(text + "\nword s gens op(mul, gen(2, 0), gen(2, 0))\n");
    REQUIRE(d.word("s")->word.layer == 2);
    REQUIRE(evaluate_word(gf, gt, d.word("s")->word) == 3);  // w*w = w2
  }
  SECTION("malformed terms are parse errors") {
    std::string text = corpus::read_file(corpus::fixture_path("gf_tower.om"));
    REQUIRE_THROWS_AS(parse_document(text + "\nword b gens gen(2)\n"), parse_error);
    REQUIRE_THROWS_AS(parse_document(text + "\nword b gens op(nosuch, gen(2, 0))\n"),
                      parse_error);
    REQUIRE_THROWS_AS(parse_document(text + "\nword b gens const(nosuch)\n"), parse_error);
    REQUIRE_THROWS_AS(parse_document(text + "\nword b gens act(gen(2, 0))\n"), parse_error);
    REQUIRE_THROWS_AS(parse_document(text + "\nword b gens gen(2, 0) extra\n"), parse_error);
  }
}

TEST_CASE("document validation reports problems keyed by object") {
  auto problems_of = [](const std::string& text) {
    return validate_document(parse_document(text));
  };

  SECTION("a fully valid document has none") {
    REQUIRE(problems_of(kSmallDoc).ok());
  }
  SECTION("truncated operation table") {
    std::string text = std::string(kSmallDoc);
    text.replace(text.find("table add 0 1 2 1 2 0 2 0 1"), 27, "table add 0 1 2 1 2 0 2 0");
    DocumentProblems p = problems_of(text);
    REQUIRE_FALSE(p.ok());
    REQUIRE_THAT(joined(p), Catch::Matchers::ContainsSubstring("algebra z3"));
  }
  SECTION("an action that is not a space endomorphism") {
    std::string text =
        "signature addsig\n  op add 2\nend\n"
        "signature bare\nend\n"
        "algebra e1 bare\n  elements e\nend\n"
        "algebra z3 addsig\n  elements 0 1 2\n  table add 0 1 2 1 2 0 2 0 1\nend\n"
        "interp free bare addsig\nend\n"
        "representation r e1 z3 free\n  act e 0 0 1\nend\n";
    DocumentProblems p = problems_of(text);
    REQUIRE_FALSE(p.ok());
    REQUIRE_THAT(joined(p), Catch::Matchers::ContainsSubstring("representation r"));
  }
  SECTION("an action table that violates the interpretation law") {
    std::string text = std::string(kSmallDoc);
    text.replace(text.find("  act 1 1 2 0"), 13, "  act 1 0 1 2");
    DocumentProblems p = problems_of(text);
    REQUIRE_FALSE(p.ok());
    REQUIRE_THAT(joined(p), Catch::Matchers::ContainsSubstring("representation z3t"));
  }
  SECTION("an interpretation with a missing map") {
    std::string text = std::string(kSmallDoc);
    text.replace(text.find("  map add compose\n"), 18, "");
    DocumentProblems p = problems_of(text);
    REQUIRE_THAT(joined(p), Catch::Matchers::ContainsSubstring("no map for operation 'add'"));
    // the dependent representation is skipped, not crashed
    REQUIRE_THAT(joined(p), !Catch::Matchers::ContainsSubstring("representation z3t"));
  }
  SECTION("a morphism that does not commute") {
    std::string text = std::string(kSmallDoc) +
                       "\nmorphism bad z3t z3t\n  dom 0 2 1\n  spc 0 1 2\nend\n";
    DocumentProblems p = problems_of(text);
    REQUIRE_FALSE(p.ok());
    REQUIRE_THAT(joined(p), Catch::Matchers::ContainsSubstring("morphism bad"));
    REQUIRE_THAT(joined(p), Catch::Matchers::ContainsSubstring("commutation"));
  }
  SECTION("a morphism with the wrong number of values") {
    std::string text = std::string(kSmallDoc) +
                       "\nmorphism bad z3t z3t\n  dom 0 2\n  spc 0 1 2\nend\n";
    DocumentProblems p = problems_of(text);
    REQUIRE_THAT(joined(p), Catch::Matchers::ContainsSubstring("dom line lists 2 values"));
  }
  SECTION("dependents of an invalid representation are 'not checked'") {
    std::string text = std::string(kSmallDoc);
    text.replace(text.find("  act 1 1 2 0"), 13, "  act 1 0 1 2");
    text += "\nmorphism m z3t z3t\n  dom 0 1 2\n  spc 0 1 2\nend\n";
    text += "\ntower tw\n  rep z3t\nend\n";
    DocumentProblems p = problems_of(text);
    REQUIRE_THAT(joined(p), Catch::Matchers::ContainsSubstring("morphism m: not checked"));
    REQUIRE_THAT(joined(p), Catch::Matchers::ContainsSubstring("tower tw: not checked"));
  }
  SECTION("a word using an out-of-range generator index") {
    std::string text = std::string(kSmallDoc) + "\nword w2 gens act(const(1), gen(2, 4))\n";
    DocumentProblems p = problems_of(text);
    REQUIRE_FALSE(p.ok());
    REQUIRE_THAT(joined(p), Catch::Matchers::ContainsSubstring("word w2"));
  }
  SECTION("a representation whose interp signature does not match") {
    std::string text = std::string(kSmallDoc) +
                       "\ninterp other bare bare\nend\n"
                       "\nrepresentation r2 z3 s3 other\n  act 0 0 1 2\n  act 1 1 2 0\n"
                       "  act 2 2 0 1\nend\n";
    DocumentProblems p = problems_of(text);
    REQUIRE_THAT(joined(p),
                 Catch::Matchers::ContainsSubstring("declared for signature 'bare'"));
  }
  SECTION("a tower morphism with too few map lines") {
    std::string gf = corpus::read_file(corpus::fixture_path("gf_tower.om"));
    std::string text = gf + "\ntowermorphism short gf gf\n  map 0 1\n  map 0 1 w2 w\nend\n";
    DocumentProblems p = problems_of(text);
    REQUIRE_FALSE(p.ok());
    REQUIRE_THAT(joined(p), Catch::Matchers::ContainsSubstring("towermorphism short"));
  }
}

TEST_CASE("gensets serialize every layer and sort their elements") {
  std::string gf = corpus::read_file(corpus::fixture_path("gf_tower.om"));
  // an empty layer line and unsorted elements normalize on output
  std::string text = gf + "\ngenset g2 gf\n  layer 3 10 01 10\nend\n";
  Document doc = parse_document(text);
  std::string canon = serialize_document(doc);
  REQUIRE_THAT(canon, Catch::Matchers::ContainsSubstring(
                          "genset g2 gf\n  layer 2\n  layer 3 01 10\nend"));
  const DocGenset* g = doc.genset("g2");
  REQUIRE(g->layers.at(3) == std::vector<Elt>{1, 4});
  REQUIRE(g->layers.count(2) == 0);

  SECTION("genset tuples pad missing layers with empty sets") {
    GeneratingTuple gt = doc.genset_tuple(*g);
    REQUIRE(gt.sets.size() == 2);
    REQUIRE(gt.sets[0].empty());
    REQUIRE(gt.sets[1] == std::vector<Elt>{1, 4});
  }
}

TEST_CASE("documents may target a representation as a two-layer tower") {
  Document doc = parse_document(corpus::read_file(corpus::fixture_path("z3_translation.om")));
  Tower t = doc.target_tower("z3t");
  REQUIRE(t.layers() == 2);
  GeneratingTuple gt = doc.genset_tuple(*doc.genset("gens"));
  REQUIRE(gt.sets.size() == 1);
  REQUIRE(evaluate_word(t, gt, doc.word("w1")->word) == 1);
}
