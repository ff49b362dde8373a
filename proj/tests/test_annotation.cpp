#include <algorithm>
#include <random>

#include "doctest.h"
#include "test_util.hpp"
#include "tgame/annotation.hpp"
#include "tgame/json_io.hpp"
#include "tgame/oracle.hpp"

using namespace tgame;
using testing::error_code_of;
using R = PointRelation;

namespace {

AnnotationImport imp(std::string text, std::optional<std::string> dct = std::nullopt,
                     std::optional<std::vector<SpanInput>> entities = std::nullopt) {
  return {std::move(dct), std::move(text), std::move(entities)};
}

// "a b c d" with three one-letter intervals: a=e1, b=e2, c=e3.
Session abc() {
  return Session::create(imp("a b c d", std::nullopt, {{{0, 1}, {2, 3}, {4, 5}}}), "s", 42);
}

EndpointId S(const char* id) { return {id, Side::Start}; }
EndpointId E(const char* id) { return {id, Side::End}; }

}  // namespace

TEST_CASE("create") {
  auto plain = Session::create(imp("He ran."), "s1");
  CHECK(plain.entities().empty());
  CHECK(plain.board().visible_cell_count() == 0);
  CHECK(plain.text() == "He ran.");

  auto dated = Session::create(imp("He ran.", "2024-01-01"), "s2");
  CHECK(dated.text() == "Document creation time: 2024-01-01 He ran.");
  REQUIRE(dated.entities().size() == 1);
  CHECK(dated.entities()[0].id == "dct");
  CHECK(dated.entities()[0].is_dct);
  CHECK(dated.entities()[0].text == "2024-01-01");
  CHECK(dated.entities()[0].kind == EntityKind::Interval);

  auto spans = Session::create(imp("He ran.", "2024-01-01", {{{3, 6}}}), "s3");
  REQUIRE(spans.entities().size() == 2);
  CHECK(spans.entities()[1].id == "e1");
  CHECK(spans.entities()[1].text == "ran");
  CHECK(spans.entities()[1].start_char == 38);

  CHECK(error_code_of([] { Session::create(imp("ab", std::nullopt, {{{0, 5}}}), "x"); }) ==
        ErrorCode::InvalidSpan);
  CHECK(error_code_of([] { Session::create(imp(""), "x"); }) == ErrorCode::EmptyText);
  CHECK(error_code_of([] {
          Session::create(imp("abcd", std::nullopt, {{{0, 2}, {1, 3}}}), "x");
        }) == ErrorCode::OverlappingSpans);
}

TEST_CASE("entity editing") {
  auto s = Session::create(imp("abcdef"), "s");
  s.add_entity(0, 2);
  CHECK(error_code_of([&] { s.add_entity(1, 3); }) == ErrorCode::OverlappingSpans);
  CHECK(error_code_of([&] { s.add_entity(3, 99); }) == ErrorCode::InvalidSpan);
  CHECK(error_code_of([&] { s.remove_entity("nope"); }) == ErrorCode::UnknownEntity);
  CHECK(error_code_of([&] { s.set_kind("nope", EntityKind::Instant); }) ==
        ErrorCode::UnknownEntity);
  const auto& b = s.add_entity(3, 5);
  CHECK(b.id == "e2");
  CHECK(s.annotate(E("e1"), S("e2"), R::Before).coherent);
  CHECK(s.board().count(Provenance::Inferred) == 3);
  s.remove_entity("e2");
  CHECK(s.board().endpoint_count() == 2);
  CHECK(s.board().count(Provenance::Axiom) == 1);
  CHECK(s.board().user_labels().empty());
  CHECK(s.add_entity(3, 5).id == "e3");
}

TEST_CASE("instant kind collapses to one endpoint") {
  auto s = Session::create(imp("abc"), "s");
  s.add_entity(0, 1);
  s.set_kind("e1", EntityKind::Instant);
  REQUIRE(s.board().endpoint_count() == 1);
  CHECK(s.board().endpoints()[0] == EndpointId{"e1", Side::Point});
  const auto view = io::session_view(s);
  CHECK(view["board"]["endpoints"][0]["header"].get<std::string>().rfind("i ", 0) == 0);
}

TEST_CASE("surviving labels survive edits") {
  auto s = abc();
  s.annotate(E("e1"), S("e2"), R::Before);
  s.annotate(S("e3"), E("e2"), R::Equal);
  const auto before = s.board().user_labels();
  s.add_entity(6, 7);
  CHECK(s.board().user_labels() == before);
  s.set_kind("e4", EntityKind::Instant);
  CHECK(s.board().user_labels() == before);
  s.remove_entity("e4");
  CHECK(s.board().user_labels() == before);
  s.remove_entity("e1");
  for (const auto& l : s.board().user_labels()) {
    CHECK(l.source.entity_id != "e1");
    CHECK(l.target.entity_id != "e1");
  }
  CHECK(s.board().user_labels().size() == 1);
}

TEST_CASE("annotate") {
  auto s = abc();
  auto out = s.annotate(E("e1"), S("e2"), R::Before);
  CHECK(out.coherent);
  CHECK(out.inferred.size() == 3);
  out = s.annotate(E("e2"), S("e3"), R::Before);
  CHECK(out.coherent);
  // e1 and e3 are now fully ordered by closure.
  CHECK(s.board().label(*s.board().endpoint_index(S("e1")),
                        *s.board().endpoint_index(E("e3"))) == R::Before);
  const auto graph = s.board().graph();
  const auto cells = s.board().cells();
  out = s.annotate(S("e3"), E("e1"), R::Before);
  CHECK_FALSE(out.coherent);
  CHECK_FALSE(s.coherent());
  REQUIRE(out.conflict.has_value());
  CHECK(s.board().graph() == graph);
  CHECK(s.board().cells().size() == cells.size());
  CHECK(error_code_of([&] { s.annotate(S("e1"), S("e1"), R::Before); }) ==
        ErrorCode::InvalidPair);
  CHECK(error_code_of([&] { s.annotate(S("e1"), S("zz"), R::Before); }) ==
        ErrorCode::InvalidPair);
  CHECK(error_code_of([&] { s.annotate(S("e1"), E("e3"), R::Before); }) ==
        ErrorCode::CellNotPlayable);
  CHECK(error_code_of([&] { s.annotate(S("e1"), E("e3"), R::Vague); }) ==
        ErrorCode::CellNotPlayable);
  // The axiom cell is filled too: end before start is flagged.
  out = s.annotate(S("e1"), E("e1"), R::After);
  CHECK_FALSE(out.coherent);
}

TEST_CASE("annotate on an empty pair infers nothing") {
  auto s = Session::create(imp("a b", std::nullopt, {{{0, 1}, {2, 3}}}), "s");
  s.set_kind("e1", EntityKind::Instant);
  s.set_kind("e2", EntityKind::Instant);
  const auto out = s.annotate({"e1", Side::Point}, {"e2", Side::Point}, R::Before);
  CHECK(out.coherent);
  CHECK(out.inferred.empty());
  CHECK(s.coherent());
}

TEST_CASE("vague placeholders can be re-annotated") {
  auto s = abc();
  CHECK(s.annotate(E("e1"), S("e2"), R::Vague).coherent);
  CHECK(s.board().provenance(1, 2) == Provenance::User);
  CHECK(s.board().label(1, 2) == R::Vague);
  const auto graph_before = s.board().graph();
  const auto out = s.annotate(E("e1"), S("e2"), R::Before);
  CHECK(out.coherent);
  CHECK(s.board().label(1, 2) == R::Before);

  // The closure delta equals the oracle's new definite labels.
  auto g = graph_before;
  g.set(1, 2, R::Before);
  const auto oracle = oracle_minimal_labels(g);
  REQUIRE(oracle.consistent);
  std::size_t fresh = 0;
  for (std::size_t p = 0; p < g.size(); ++p)
    for (std::size_t q = p + 1; q < g.size(); ++q)
      if (is_definite(oracle.labels.label(p, q)) && !is_definite(graph_before.label(p, q)) &&
          !(p == 1 && q == 2)) {
        ++fresh;
        CHECK(s.board().label(p, q) == oracle.labels.label(p, q));
      }
  CHECK(out.inferred.size() == fresh);
}

TEST_CASE("next_pair") {
  auto one = Session::create(imp("a b", std::nullopt, {{{0, 1}, {2, 3}}}), "s", 3);
  one.set_kind("e1", EntityKind::Instant);
  one.set_kind("e2", EntityKind::Instant);
  for (auto mode : {SuggestionMode::Random, SuggestionMode::Guided}) {
    const auto p = one.next_pair(mode, stub_confidence_scorer());
    CHECK(p.source == EndpointId{"e1", Side::Point});
    CHECK(p.target == EndpointId{"e2", Side::Point});
    CHECK(p.mode == mode);
  }
  one.annotate({"e1", Side::Point}, {"e2", Side::Point}, R::Equal);
  CHECK(error_code_of([&] { one.next_pair(SuggestionMode::Random, stub_confidence_scorer()); }) ==
        ErrorCode::BoardComplete);
}

TEST_CASE("random suggestions replay from the seed") {
  auto run = [] {
    auto s = Session::create(imp("a b c", std::nullopt, {{{0, 1}, {2, 3}, {4, 5}}}), "s", 42);
    for (const char* id : {"e1", "e2", "e3"}) s.set_kind(id, EntityKind::Instant);
    std::vector<std::string> seq;
    for (int i = 0; i < 5; ++i) {
      const auto p = s.next_pair(SuggestionMode::Random, stub_confidence_scorer());
      seq.push_back(p.source.str() + "/" + p.target.str());
    }
    return seq;
  };
  const auto first = run();
  CHECK(first == run());
  std::mt19937_64 rng(42);
  const std::vector<std::string> cells = {"e1.point/e2.point", "e1.point/e3.point",
                                          "e2.point/e3.point"};
  for (const auto& got : first) CHECK(got == cells[rng() % 3]);
}

TEST_CASE("guided suggestions rank by the stub hash") {
  auto s = abc();
  const auto ranked = s.ranked_pairs(stub_confidence_scorer());
  REQUIRE(ranked.size() == s.board().empty_cells().size());
  auto stub = [&](const PairSuggestion& p) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : p.source.str() + "|" + p.target.str() + "|" + s.text()) {
      h ^= c;
      h *= 1099511628211ull;
    }
    return static_cast<double>(h >> 11) / 9007199254740992.0;
  };
  for (std::size_t i = 0; i < ranked.size(); ++i) {
    CHECK(*ranked[i].confidence == stub(ranked[i]));
    CHECK(*ranked[i].confidence >= 0.0);
    CHECK(*ranked[i].confidence <= 1.0);
    if (i > 0) CHECK(*ranked[i - 1].confidence >= *ranked[i].confidence);
  }
  const auto top = s.next_pair(SuggestionMode::Guided, stub_confidence_scorer());
  CHECK(top.source == ranked[0].source);
  CHECK(top.target == ranked[0].target);

  // Ties keep canonical order.
  const auto flat = s.ranked_pairs([](auto&&...) { return 0.5; });
  const auto empty = s.board().empty_cells();
  for (std::size_t i = 0; i < flat.size(); ++i) {
    CHECK(flat[i].source == s.board().endpoints()[empty[i].first]);
    CHECK(flat[i].target == s.board().endpoints()[empty[i].second]);
  }
}

TEST_CASE("stub detector") {
  auto s = Session::create(imp("He ran on 2013-03-22."), "s");
  const auto spans = stub_entity_detector()("He ran on 2013-03-22.");
  const auto timexes = std::count_if(spans.begin(), spans.end(),
                                     [](const DetectedSpan& d) { return d.label == "timex"; });
  CHECK(timexes == 1);
  CHECK(s.detect_entities(stub_entity_detector()) == 2);
  std::vector<std::string> texts;
  for (const auto& e : s.entities()) texts.push_back(e.text);
  CHECK(texts == std::vector<std::string>{"ran", "2013-03-22"});

  auto none = Session::create(imp("Nothing to see."), "s");
  CHECK(none.detect_entities(stub_entity_detector()) == 0);
  CHECK(none.entities().empty());

  auto manual = Session::create(imp("He ran on 2013-03-22.", std::nullopt, {{{10, 14}}}), "s");
  CHECK(manual.detect_entities(stub_entity_detector()) == 1);
  CHECK(manual.entities().size() == 2);

  const auto years = stub_entity_detector()("In 1999 and 2013-2014 or x2001");
  REQUIRE(years.size() == 1);
  CHECK(years[0].start == 3);
}

TEST_CASE("detector offsets are shifted past the prefix") {
  auto s = Session::create(imp("He ran.", "2024-01-01"), "s");
  CHECK(s.detect_entities(stub_entity_detector()) == 1);
  const auto& ran = s.entities().back();
  CHECK(ran.text == "ran");
  CHECK(ran.start_char == s.prefix_length() + 3);
}

TEST_CASE("export and import") {
  auto fresh = Session::create(imp("He ran."), "s");
  const auto empty = io::export_session(fresh);
  CHECK(empty["format_version"] == 1);
  CHECK(empty["entities"].empty());
  CHECK(empty["relations"].empty());
  CHECK(empty["coherent"] == true);

  auto s = Session::create(imp("He ran on Monday.", "2024-01-01", {{{3, 6}, {10, 16}}}), "s");
  s.set_kind("e2", EntityKind::Instant);
  s.annotate({"e1", Side::End}, {"e2", Side::Point}, R::Before);
  const auto ex = io::export_session(s);
  CHECK(ex["dct"] == "2024-01-01");
  CHECK(ex["text"] == "He ran on Monday.");
  std::size_t users = 0, axioms = 0;
  for (const auto& r : ex["relations"]) {
    users += r["provenance"] == "user";
    axioms += r["provenance"] == "axiom";
  }
  CHECK(users == 1);
  CHECK(axioms == 2);
  // e1.end < e2 gives e1.start < e2; the DCT stays unrelated.
  CHECK(ex["relations"].size() == 4);

  const auto back = io::import_session(io::Json::parse(ex.dump()), "s2", 0);
  CHECK(back.text() == s.text());
  CHECK(back.entities() == s.entities());
  CHECK(back.board().graph() == s.board().graph());
  CHECK(back.board().cells() == s.board().cells());
  CHECK(io::export_session(back) == ex);

  const auto plain = io::annotation_import_from_json(
      io::Json::parse(R"({"text": "abc", "entities": [{"start": 0, "end": 1}]})"));
  CHECK(plain.text == "abc");
  CHECK_FALSE(plain.dct.has_value());
  REQUIRE(plain.entities.has_value());
  CHECK(plain.entities->size() == 1);
  CHECK(error_code_of([] {
          io::annotation_import_from_json(io::Json::parse(R"({"dct": "x"})"));
        }) == ErrorCode::MalformedInput);
}
