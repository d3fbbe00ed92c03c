// SPDX-License-Identifier: Apache-2.0
//
// srceq command line: equiv, classify, trace, provenance {emit,check}.
// Exit codes: 0 success/equivalent/pass, 1 non-equivalent/mismatch, 2 error.

#include <chrono>
#include <ctime>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "srceq/srceq.hpp"

namespace {

using namespace srceq;

struct Options {
    std::string format = "text";
    std::string repo;
    std::vector<std::string> excludes;
    std::string hints;
    std::string config;
    std::string labels;
    bool stamp = false;
};

struct Labels {
    std::string a = "a";
    std::string b = "b";
};

Labels parse_labels(const std::string& spec) {
    Labels out;
    if (spec.empty()) return out;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ',')) {
        auto eq = item.find('=');
        if (eq == std::string::npos) throw CLI::ValidationError("--labels", "expected a=NAME,b=NAME");
        std::string key = item.substr(0, eq), value = item.substr(eq + 1);
        if (key == "a") out.a = value;
        else if (key == "b") out.b = value;
        else throw CLI::ValidationError("--labels", "unknown side '" + key + "'");
    }
    return out;
}

std::string utc_now() {
    std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void emit(const Report& report, const Options& opt) {
    std::cout << (opt.format == "json" ? render_json(report) : render_text(report));
}

Report base_report(const std::string& command, const Options& opt) {
    Report r;
    r.command = command;
    if (opt.stamp) r.stamp = utc_now();
    return r;
}

void add_warnings(Report& r, const SourceArchive& a) {
    for (const auto& w : a.warnings) r.warnings.push_back(a.label + ": " + w);
}

PathFilter repo_filter(const Options& opt) {
    auto patterns = PathFilter::default_repo_excludes();
    patterns.insert(patterns.end(), opt.excludes.begin(), opt.excludes.end());
    return PathFilter(patterns);
}

SourceArchive load_repo(const Options& opt) {
    std::error_code ec;
    if (!std::filesystem::is_directory(opt.repo, ec)) throw IoError("repository root is not a readable directory: " + opt.repo);
    return load_directory(opt.repo, "repo", repo_filter(opt));
}

int cmd_equiv(const std::string& pa, const std::string& pb, const Options& opt, bool classify) {
    Labels labels = parse_labels(opt.labels);
    PathFilter filter(opt.excludes);
    SourceArchive a = load_archive(pa, labels.a, filter);
    SourceArchive b = load_archive(pb, labels.b, filter);
    HeuristicsConfig config = opt.config.empty() ? HeuristicsConfig{} : HeuristicsConfig::load(opt.config);

    Report report = base_report(classify ? "classify" : "equiv", opt);
    report.inputs = {{a.label, a.origin}, {b.label, b.origin}};
    add_warnings(report, a);
    add_warnings(report, b);
    ArchiveVerdict av = compare_archives(a, b);
    if (classify) {
        std::vector<TraceResult> traces;
        if (!opt.repo.empty()) {
            SourceArchive repo = load_repo(opt);
            traces.push_back(trace_against(a, repo));
            traces.push_back(trace_against(b, repo));
            report.inputs.push_back({repo.label, repo.origin});
            report.trace = traces.front();
        }
        std::vector<const TraceResult*> hints;
        for (const auto& t : traces) hints.push_back(&t);
        report.classification = classify_archive(av, a, b, hints, config);
    }
    bool equivalent = av.equivalent;
    report.archive_verdict = std::move(av);
    emit(report, opt);
    return equivalent ? 0 : 1;
}

int cmd_trace(const std::string& path, const Options& opt) {
    if (opt.repo.empty()) throw CLI::ValidationError("--repo", "required for trace");
    Labels labels = parse_labels(opt.labels);
    SourceArchive archive = load_archive(path, labels.a, PathFilter(opt.excludes));
    SourceArchive repo = load_repo(opt);
    Report report = base_report("trace", opt);
    report.inputs = {{archive.label, archive.origin}, {repo.label, repo.origin}};
    add_warnings(report, archive);
    report.trace = trace_against(archive, repo);
    for (const auto& w : report.trace->warnings) report.warnings.push_back(w);
    emit(report, opt);
    return 0;
}

int cmd_emit(const std::string& path, const std::string& out_path, const Options& opt) {
    Labels labels = parse_labels(opt.labels);
    SourceArchive archive = load_archive(path, labels.a, PathFilter(opt.excludes));
    std::optional<TraceResult> trace;
    if (!opt.repo.empty()) trace = trace_against(archive, load_repo(opt));
    std::vector<GeneratorHint> hints = opt.hints.empty() ? std::vector<GeneratorHint>{} : load_hints(opt.hints);
    Manifest manifest = emit_manifest(archive, trace ? &*trace : nullptr, hints);
    std::ofstream out(out_path, std::ios::binary);
    out << write_manifest(manifest);
    if (!out) throw IoError("cannot write " + out_path);
    Report report = base_report("provenance emit", opt);
    report.inputs = {{archive.label, archive.origin}};
    add_warnings(report, archive);
    report.provenance_manifest = std::move(manifest);
    emit(report, opt);
    return 0;
}

int cmd_check(const std::string& path, const std::string& manifest_path, const Options& opt) {
    Labels labels = parse_labels(opt.labels);
    SourceArchive archive = load_archive(path, labels.a, PathFilter(opt.excludes));
    Manifest manifest = parse_manifest(read_file(manifest_path));
    Report report = base_report("provenance check", opt);
    report.inputs = {{archive.label, archive.origin}};
    add_warnings(report, archive);
    report.provenance_check = check_manifest(archive, manifest);
    bool passed = report.provenance_check->passed();
    emit(report, opt);
    return passed ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Source equivalence and build-cause analysis for Java source archives", "srceq"};
    app.set_version_flag("--version", SRCEQ_VERSION);
    app.require_subcommand(1);
    Options opt;
    auto common = [&](CLI::App* sub) {
        sub->add_option("--format", opt.format, "Output format")->check(CLI::IsMember({"text", "json"}));
        sub->add_option("--exclude", opt.excludes, "Exclude glob (repeatable)");
        sub->add_option("--labels", opt.labels, "Input labels, e.g. a=mvnc,b=gaoss");
        sub->add_flag("--stamp", opt.stamp, "Include the wall-clock time in the report");
    };

    std::string path_a, path_b, out_path, manifest_path;
    auto* equiv = app.add_subcommand("equiv", "Decide source equivalence of two archives");
    equiv->add_option("A", path_a)->required();
    equiv->add_option("B", path_b)->required();
    common(equiv);

    auto* classify = app.add_subcommand("classify", "Explain differences between two archives");
    classify->add_option("A", path_a)->required();
    classify->add_option("B", path_b)->required();
    classify->add_option("--repo", opt.repo, "Repository checkout to trace against");
    classify->add_option("--config", opt.config, "Heuristics configuration file");
    common(classify);

    auto* trace = app.add_subcommand("trace", "Trace archive classes to a repository checkout");
    trace->add_option("ARCHIVE", path_a)->required();
    trace->add_option("--repo", opt.repo, "Repository checkout")->required();
    common(trace);

    auto* prov = app.add_subcommand("provenance", "Generator provenance manifests");
    prov->require_subcommand(1);
    auto* emit_cmd = prov->add_subcommand("emit", "Write a provenance manifest");
    emit_cmd->add_option("ARCHIVE", path_a)->required();
    emit_cmd->add_option("--out", out_path, "Manifest output file")->required();
    emit_cmd->add_option("--repo", opt.repo, "Repository checkout to trace against");
    emit_cmd->add_option("--hints", opt.hints, "Generator hints file");
    common(emit_cmd);
    auto* check_cmd = prov->add_subcommand("check", "Verify an archive against a manifest");
    check_cmd->add_option("ARCHIVE", path_a)->required();
    check_cmd->add_option("--manifest", manifest_path, "Manifest file")->required();
    common(check_cmd);

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*equiv) return cmd_equiv(path_a, path_b, opt, false);
        if (*classify) return cmd_equiv(path_a, path_b, opt, true);
        if (*trace) return cmd_trace(path_a, opt);
        if (*emit_cmd) return cmd_emit(path_a, out_path, opt);
        if (*check_cmd) return cmd_check(path_a, manifest_path, opt);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "srceq: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "srceq: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
