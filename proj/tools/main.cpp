#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>

#include "CLI11.hpp"

#include "ultrafix/cli.hpp"

namespace {

using ultrafix::cli::json;

struct Flags {
    std::string request;
    std::string map;
    std::string field;
    std::string geometry;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> samples;
    std::optional<std::string> tol;
};

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return json::parse(in);
}

// Inline JSON when the argument looks like an object, a file path otherwise.
json file_or_inline(const std::string& arg) {
    const auto first = arg.find_first_not_of(" \t\n");
    if (first != std::string::npos && arg[first] == '{') return json::parse(arg);
    return read_json_file(arg);
}

int emit(const ultrafix::cli::Response& r) {
    std::cout << ultrafix::cli::render(r.body);
    return r.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"ultrafix: certified local inversion, implicit functions and fixed points over Q_p and R"};
    app.require_subcommand(1);
    Flags flags;
    const std::pair<const char*, const char*> commands[] = {
        {"invert", "solve f(v) = target inside a certified ball"},
        {"implicit", "build a parameter window and solve f(p, x) = z for x"},
        {"fixpoint", "Banach iteration of a contraction with a priori bounds"},
        {"certify", "inversion certificate, plus sampled distortion checks"},
        {"check", "difference-quotient identity suite on random samples"},
    };
    for (const auto& [name, help] : commands) {
        CLI::App* sub = app.add_subcommand(name, help);
        sub->add_option("--request", flags.request, "request JSON file");
        sub->add_option("--map", flags.map, "map JSON file");
        sub->add_option("--field", flags.field, "field JSON file or inline JSON");
        sub->add_option("--geometry", flags.geometry, "geometry JSON file or inline JSON");
        sub->add_option("--seed", flags.seed, "sampling seed (default 0)");
        sub->add_option("--samples", flags.samples, "sample count (default 1000)");
        sub->add_option("--tol", flags.tol, "tolerance for real fields (default 1e-12)");
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : ultrafix::cli::kSchemaError;
    }
    const std::string command = app.get_subcommands().front()->get_name();

    json request = json::object();
    try {
        if (!flags.request.empty()) request = read_json_file(flags.request);
        if (!request.is_object()) throw std::runtime_error("request must be a JSON object");
        if (!flags.map.empty()) request["map"] = read_json_file(flags.map);
        if (!flags.field.empty()) request["field"] = file_or_inline(flags.field);
        if (!flags.geometry.empty()) request["geometry"] = file_or_inline(flags.geometry);
    } catch (const std::exception& e) {
        ultrafix::cli::Response r;
        r.body = {{"schema_version", ultrafix::json_io::kSchemaVersion},
                  {"command", command},
                  {"status", "invalid_request"},
                  {"error", {{"kind", "SchemaError"}, {"message", e.what()}, {"details", json::object()}}}};
        r.exit_code = ultrafix::cli::kSchemaError;
        return emit(r);
    }
    request["command"] = command;
    if (flags.seed) request["seed"] = *flags.seed;
    if (flags.samples) request["samples"] = *flags.samples;
    if (flags.tol) request["tolerance"] = *flags.tol;
    return emit(ultrafix::cli::run(request));
}
