// SPDX-License-Identifier: Apache-2.0

#include <catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>

#include "srceq/classifier.hpp"

using namespace srceq;
namespace fs = std::filesystem;

namespace {

const std::string fixtures = SRCEQ_FIXTURES;

struct Classified {
    SourceUnit a, b;
    PairVerdict pair;
    CauseVerdict verdict;
};

Classified classify(const std::string& a, const std::string& b, std::vector<const TraceResult*> traces = {},
                    const HeuristicsConfig& config = {}, const std::string& path = "p/X.java") {
    Classified c{analyze_unit(path, a), analyze_unit(path, b), {}, {}};
    c.pair = compare_pair(c.a, c.b);
    c.verdict = classify_pair(c.pair, c.a, c.b, traces, config);
    return c;
}

double confidence(const CauseVerdict& v, CauseLabel l) {
    const LabelEvidence* e = v.find(l);
    return e ? e->confidence : -1.0;
}

void check_evidence_is_exact(const CauseVerdict& v, const SourceUnit& a, const SourceUnit& b) {
    for (const auto& l : v.labels) {
        for (const auto& e : l.evidence) {
            const std::string& text = e.side == 'a' ? a.text : b.text;
            REQUIRE(e.offset + e.text.size() <= text.size());
            CHECK(text.compare(e.offset, e.text.size(), e.text) == 0);
        }
    }
}

} // namespace

TEST_CASE("build metadata in literals") {
    auto c = classify("class X { static final String VERSION = \"1.0\"; }", "class X { static final String VERSION = \"1.1\"; }");
    CHECK(confidence(c.verdict, CauseLabel::CodegenMeta) == 1.0);
    CHECK(c.verdict.labels.size() == 1);
    check_evidence_is_exact(c.verdict, c.a, c.b);

    auto unresolved = classify("class X { String s = \"${git.commit.id}\"; }", "class X { String s = \"4f2a9c\"; }");
    CHECK(unresolved.verdict.has(CauseLabel::CodegenMeta));
}

TEST_CASE("literal changes outside the lexicon are not metadata") {
    auto c = classify("class X { String GREETING = \"hi\"; }", "class X { String GREETING = \"hello\"; }");
    CHECK_FALSE(c.verdict.has(CauseLabel::CodegenMeta));
    REQUIRE(c.verdict.labels.size() == 1);
    CHECK(c.verdict.labels[0].label == CauseLabel::InconsistentCommit);
    CHECK(c.verdict.labels[0].confidence == 0.5);

    HeuristicsConfig config;
    config.set("meta.lexicon", "greeting");
    CHECK(classify("class X { String GREETING = \"hi\"; }", "class X { String GREETING = \"hello\"; }", {}, config)
              .verdict.has(CauseLabel::CodegenMeta));
}

TEST_CASE("confidence is the share of explained hunks") {
    std::string a = "class X { String VERSION = \"1\"; String BUILD = \"2\"; String DATE = \"3\"; int count = 4; }";
    std::string b = "class X { String VERSION = \"9\"; String BUILD = \"8\"; String DATE = \"7\"; int count = 5; }";
    auto c = classify(a, b);
    REQUIRE(c.pair.diff_hunks.size() == 4);
    CHECK(confidence(c.verdict, CauseLabel::CodegenMeta) == Catch::Approx(0.75));
    CHECK_FALSE(c.verdict.has(CauseLabel::InconsistentCommit));
}

TEST_CASE("generated annotations") {
    auto c = classify("import javax.annotation.Generated;\n@Generated(\"gen\")\nclass X { int x; }",
                      "import javax.annotation.Generated;\n@Generated(value = \"gen\", date = \"2021-01-01\")\nclass X { int x; }");
    CHECK(confidence(c.verdict, CauseLabel::CodegenGeneratedAnnotation) == 1.0);
    CHECK_FALSE(c.verdict.has(CauseLabel::CodegenMeta));

    auto one_sided = classify("@javax.annotation.Generated(\"gen\") class X {}", "class X {}");
    CHECK(one_sided.verdict.has(CauseLabel::CodegenGeneratedAnnotation));
    check_evidence_is_exact(one_sided.verdict, one_sided.a, one_sided.b);
}

TEST_CASE("protoc output with a generated annotation carries both labels") {
    std::string banner = "// Generated by the protocol buffer compiler.  DO NOT EDIT!\n";
    auto c = classify(banner + "@Generated(\"protoc\")\nclass X { int a; }", banner + "class X { int a; }");
    CHECK(c.verdict.has(CauseLabel::CodegenProto));
    CHECK(c.verdict.has(CauseLabel::CodegenGeneratedAnnotation));
    check_evidence_is_exact(c.verdict, c.a, c.b);
}

TEST_CASE("protobuf runtime identifiers near a hunk") {
    auto c = classify("class X { Object f() { return ByteString.copyFrom(x); } }",
                      "class X { Object f() { return ByteString.copyFrom(y); } }");
    CHECK(c.verdict.has(CauseLabel::CodegenProto));
    HeuristicsConfig narrow;
    narrow.set("proto.window", "0");
    CHECK_FALSE(classify("class X { Object f() { return ByteString.copyFrom(x); } }",
                         "class X { Object f() { return ByteString.copyFrom(y); } }", {}, narrow)
                    .verdict.has(CauseLabel::CodegenProto));
}

TEST_CASE("qualified against simple type names") {
    auto c = classify("class X { a.b.C field; }", "class X { C field; }");
    CHECK(confidence(c.verdict, CauseLabel::CodegenGroovy) == 1.0);
    auto other = classify("class X { a.b.C field; }", "class X { D field; }");
    CHECK_FALSE(other.verdict.has(CauseLabel::CodegenGroovy));
}

TEST_CASE("reordered localization members") {
    std::string a = "package p; public final class LocalizationMessages {\n"
                    "  public static String one() { return \"1\"; }\n"
                    "  public static String two() { return \"2\"; }\n"
                    "  public static String three() { return \"3\"; }\n}";
    std::string b = "package p; public final class LocalizationMessages {\n"
                    "  private LocalizationMessages() { }\n"
                    "  public static String three() { return \"3\"; }\n"
                    "  public static String one() { return \"1\"; }\n"
                    "  public static String two() { return \"2\"; }\n}";
    auto c = classify(a, b, {}, {}, "p/LocalizationMessages.java");
    CHECK(confidence(c.verdict, CauseLabel::CodegenIstack) == 1.0);

    std::string changed = b;
    changed.replace(changed.find("\"3\""), 3, "\"4\"");
    auto d = classify(a, changed, {}, {}, "p/LocalizationMessages.java");
    CHECK(confidence(d.verdict, CauseLabel::CodegenIstack) < 1.0);

    auto rename = [](std::string s) {
        for (std::size_t i; (i = s.find("LocalizationMessages")) != std::string::npos;) s.replace(i, 20, "Messages");
        return s;
    };
    CHECK_FALSE(classify(rename(a), rename(b), {}, {}, "p/Messages.java").verdict.has(CauseLabel::CodegenIstack));
}

TEST_CASE("antlr reorderings of sibling statements") {
    std::string banner = "// $ANTLR 3.5 Expr.g\n";
    std::string a = banner + "class ExprParser extends Parser { void r() { if (a || b) { x(); y(); } } }";
    std::string b = banner + "class ExprParser extends Parser { void r() { if (b || a) { y(); x(); } } }";
    auto c = classify(a, b);
    CHECK(confidence(c.verdict, CauseLabel::CodegenAntlr) == 1.0);
    CHECK_FALSE(c.verdict.has(CauseLabel::Shading));

    auto args = classify(banner + "class ExprParser extends Parser { void r() { f(a, b); } }",
                         banner + "class ExprParser extends Parser { void r() { f(b, a); } }");
    CHECK_FALSE(args.verdict.has(CauseLabel::CodegenAntlr));

    auto ungated = classify("class Q { void r() { x(); y(); } }", "class Q { void r() { y(); x(); } }");
    CHECK_FALSE(ungated.verdict.has(CauseLabel::CodegenAntlr));
}

TEST_CASE("relocated packages") {
    auto c = classify("class X { org.shaded.com.google.Foo f; int k; int l; org.shaded.com.google.Bar b; }",
                      "class X { com.google.Foo f; int k; int l; com.google.Bar b; }");
    const LabelEvidence* s = c.verdict.find(CauseLabel::Shading);
    REQUIRE(s);
    CHECK(s->confidence == 1.0);
    REQUIRE(s->shading);
    CHECK(s->shading->prefix_pairs == std::vector<std::pair<std::string, std::string>>{{"org.shaded.com", "com"}});
    CHECK(s->shading->apply("org.shaded.com.google.Baz") == "com.google.Baz");
    CHECK(s->shading->apply("org.shadedx.Y") == "org.shadedx.Y");

    auto conflicting = classify("class X { a.b.Foo f; int k; int l; a.b.Bar g; }", "class X { c.d.Foo f; int k; int l; e.f.Bar g; }");
    CHECK_FALSE(conflicting.verdict.has(CauseLabel::Shading));

    auto swapped = classify("class X { p.q.A f; int k; int l; r.s.B g; }", "class X { r.s.A f; int k; int l; p.q.B g; }");
    CHECK_FALSE(swapped.verdict.has(CauseLabel::Shading));
}

TEST_CASE("unknown only when repository evidence is silent") {
    std::string a = "package p; class X { String GREETING = \"hi\"; }";
    std::string b = "package p; class X { String GREETING = \"hello\"; }";
    TraceResult backed;
    backed.per_class[*QualifiedName::parse("p.X")] = TraceStatus::RepoBackedIdentical;
    auto c = classify(a, b, {&backed});
    REQUIRE(c.verdict.labels.size() == 1);
    CHECK(c.verdict.labels[0].label == CauseLabel::Unknown);

    TraceResult differs;
    differs.per_class[*QualifiedName::parse("p.X")] = TraceStatus::RepoBackedDiffers;
    auto d = classify(a, b, {&backed, &differs});
    REQUIRE(d.verdict.labels.size() == 1);
    CHECK(d.verdict.labels[0].label == CauseLabel::InconsistentCommit);
    CHECK(d.verdict.labels[0].confidence == 1.0);

    auto meta = classify("package p; class X { String VERSION = \"1\"; }", "package p; class X { String VERSION = \"2\"; }", {&backed});
    CHECK_FALSE(meta.verdict.has(CauseLabel::Unknown));
}

TEST_CASE("unlexable pairs get no detector labels") {
    auto c = classify("class X { \"open }", "class X { \"open  }");
    REQUIRE(c.pair.raw_only);
    REQUIRE(c.verdict.labels.size() == 1);
    CHECK(c.verdict.labels[0].label == CauseLabel::InconsistentCommit);
}

TEST_CASE("labels are ranked and ties keep rule order") {
    std::string banner = "// Generated by the protocol buffer compiler.  DO NOT EDIT!\n";
    auto c = classify(banner + "class X { String VERSION = \"1\"; }", banner + "class X { String VERSION = \"2\"; }");
    REQUIRE(c.verdict.labels.size() == 2);
    CHECK(c.verdict.labels[0].label == CauseLabel::CodegenMeta);
    CHECK(c.verdict.labels[1].label == CauseLabel::CodegenProto);
    for (std::size_t i = 1; i < c.verdict.labels.size(); ++i)
        CHECK(c.verdict.labels[i - 1].confidence >= c.verdict.labels[i].confidence);

    HeuristicsConfig strict;
    strict.set("confidence.min", "1");
    auto partial = classify("class X { String VERSION = \"1\"; int k; int l; int count = 4; }",
                            "class X { String VERSION = \"2\"; int k; int l; int count = 5; }", {}, strict);
    CHECK_FALSE(partial.verdict.has(CauseLabel::CodegenMeta));
}

TEST_CASE("heuristics configuration") {
    auto config = HeuristicsConfig::parse("# comment\nmeta.lexicon = RELEASE, stamp\n\nproto.window = 8\nconfidence.residual=0.25\n");
    CHECK(config.meta_lexicon == std::vector<std::string>{"RELEASE", "stamp"});
    CHECK(config.proto_window == 8);
    CHECK(config.residual_confidence == 0.25);
    CHECK_THROWS_AS(HeuristicsConfig::parse("no.such.key = 1"), ConfigError);
    CHECK_THROWS_AS(HeuristicsConfig::parse("confidence.min = 2"), ConfigError);
    CHECK_THROWS_AS(HeuristicsConfig::parse("proto.window = many"), ConfigError);
    CHECK_THROWS_AS(HeuristicsConfig::parse("meta.lexicon"), ConfigError);
}

TEST_CASE("listing fixtures") {
    for (const auto& entry : fs::directory_iterator(fixtures + "/listings")) {
        std::string name = entry.path().filename().string();
        INFO(name);
        std::ifstream in(entry.path() / "expected");
        std::set<std::string> expected;
        for (std::string line; std::getline(in, line);)
            if (!line.empty()) expected.insert(line);
        auto a = load_archive(entry.path() / "a", "a");
        auto b = load_archive(entry.path() / "b", "b");
        auto av = compare_archives(a, b);
        auto result = classify_archive(av, a, b);
        REQUIRE(result.verdicts.size() == 1);
        const CauseVerdict& v = result.verdicts[0];
        for (const auto& label : expected) {
            bool found = false;
            for (const auto& l : v.labels)
                if (to_string(l.label) == label && l.confidence >= 0.9) found = true;
            CHECK(found);
        }
        for (const auto& pv : av.pair_verdicts)
            if (pv.path == v.path) check_evidence_is_exact(v, a.units.at(pv.path), b.units.at(pv.b_path));
    }
}
