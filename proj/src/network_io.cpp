#include "proxyvote/network_io.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "proxyvote/errors.hpp"

namespace proxyvote {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    for (;;) {
        const auto comma = line.find(',', start);
        fields.push_back(trim(line.substr(start, comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return fields;
}

template <typename T>
bool parse_number(std::string_view text, T& out) {
    if (text.empty()) return false;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
    return ec == std::errc() && ptr == text.data() + text.size();
}

/// Line-oriented CSV reader tracking line numbers for error messages.
class CsvReader {
  public:
    CsvReader(std::istream& in, std::string name) : in_(in), name_(std::move(name)) {}

    /// Next data row, skipping blank lines and "#" comments (which are
    /// collected). Returns false at end of input.
    bool next(std::vector<std::string_view>& fields) {
        while (std::getline(in_, line_)) {
            ++line_no_;
            const auto t = trim(line_);
            if (t.empty()) continue;
            if (t.front() == '#') {
                comments_.emplace_back(trim(t.substr(1)));
                continue;
            }
            fields = split_fields(t);
            return true;
        }
        return false;
    }

    void expect_header(std::string_view header) {
        std::vector<std::string_view> fields;
        if (!next(fields)) fail("missing header '" + std::string(header) + "'");
        std::string joined;
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (i) joined += ',';
            joined += fields[i];
        }
        if (joined != header) fail("expected header '" + std::string(header) + "', got '" + joined + "'");
    }

    void expect_fields(const std::vector<std::string_view>& fields, std::size_t count) {
        if (fields.size() != count) {
            fail("expected " + std::to_string(count) + " fields, got " +
                 std::to_string(fields.size()));
        }
    }

    template <typename T>
    T field(std::string_view text, std::string_view what) {
        T value{};
        if (!parse_number(text, value)) {
            fail("invalid " + std::string(what) + " '" + std::string(text) + "'");
        }
        return value;
    }

    [[noreturn]] void fail(const std::string& what) const { throw ParseError(name_, line_no_, what); }

    std::size_t line() const noexcept { return line_no_; }
    const std::string& name() const noexcept { return name_; }

    const std::vector<std::string>& comments() const { return comments_; }

  private:
    std::istream& in_;
    std::string name_;
    std::string line_;
    std::size_t line_no_ = 0;
    std::vector<std::string> comments_;
};

std::ifstream open_in(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
    return in;
}

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
    out.flush();
    if (!out) throw IoError("write to '" + path.string() + "' failed");
}

}  // namespace

std::string format_real(double value) {
    char buf[64];
    const int len = std::snprintf(buf, sizeof buf, "%.17g", value);
    return std::string(buf, static_cast<std::size_t>(len));
}

TrustNetwork parse_network(std::istream& nodes, std::istream& edges, const std::string& nodes_name,
                           const std::string& edges_name) {
    CsvReader nr(nodes, nodes_name);
    nr.expect_header("id,opinion");
    struct NodeRow {
        std::size_t id;
        double opinion;
        std::size_t line;
    };
    std::vector<NodeRow> rows;
    std::vector<std::string_view> f;
    while (nr.next(f)) {
        nr.expect_fields(f, 2);
        rows.push_back({nr.field<std::size_t>(f[0], "node id"), nr.field<double>(f[1], "opinion"),
                        nr.line()});
    }
    // Ids must be exactly 0..n-1, in any order.
    std::vector<double> opinions(rows.size());
    std::vector<char> seen(rows.size(), 0);
    for (const auto& row : rows) {
        if (row.id >= rows.size()) {
            throw ParseError(nodes_name, row.line,
                             "node id " + std::to_string(row.id) + " breaks dense numbering 0.." +
                                 std::to_string(rows.size() - 1));
        }
        if (seen[row.id]) {
            throw ParseError(nodes_name, row.line, "node id " + std::to_string(row.id) + " repeated");
        }
        seen[row.id] = 1;
        opinions[row.id] = row.opinion;
    }

    const std::size_t n = opinions.size();
    CsvReader er(edges, edges_name);
    er.expect_header("source,target,trust");
    std::vector<TrustEdge> list;
    while (er.next(f)) {
        er.expect_fields(f, 3);
        const auto s = er.field<std::size_t>(f[0], "source");
        const auto t = er.field<std::size_t>(f[1], "target");
        const auto w = er.field<double>(f[2], "trust");
        if (s >= n || t >= n) {
            er.fail("edge (" + std::to_string(s) + "," + std::to_string(t) +
                    ") references a node outside [0, " + std::to_string(n) + ")");
        }
        list.push_back({NodeId(s), NodeId(t), w, 0.0});
    }
    return TrustNetwork::from_edges(std::move(opinions), std::move(list));
}

TrustNetwork read_network_unchecked(const std::filesystem::path& nodes_path,
                                    const std::filesystem::path& edges_path) {
    auto nodes = open_in(nodes_path);
    auto edges = open_in(edges_path);
    return parse_network(nodes, edges, nodes_path.string(), edges_path.string());
}

TrustNetwork load_network(const std::filesystem::path& nodes_path,
                          const std::filesystem::path& edges_path, std::ostream* diagnostics) {
    const TrustNetwork raw = read_network_unchecked(nodes_path, edges_path);
    auto violations = validate_network(raw);
    if (!violations.empty()) throw ValidationError(std::move(violations));
    auto normalized = normalize_outgoing(raw);
    if (diagnostics != nullptr && !normalized.dangling.empty()) {
        *diagnostics << "note: " << normalized.dangling.size() << " dangling node(s):";
        for (NodeId id : normalized.dangling) *diagnostics << ' ' << id.value();
        *diagnostics << '\n';
    }
    return std::move(normalized.network);
}

void write_network(const TrustNetwork& network, std::ostream& nodes, std::ostream& edges) {
    nodes << "id,opinion\n";
    for (std::size_t i = 0; i < network.size(); ++i) {
        nodes << i << ',' << format_real(network.opinion(NodeId(i))) << '\n';
    }
    edges << "source,target,trust\n";
    for (const auto& e : network.edges()) {
        edges << e.source.value() << ',' << e.target.value() << ',' << format_real(e.raw_trust)
              << '\n';
    }
}

void save_network(const TrustNetwork& network, const std::filesystem::path& nodes_path,
                  const std::filesystem::path& edges_path) {
    auto nodes = open_out(nodes_path);
    auto edges = open_out(edges_path);
    write_network(network, nodes, edges);
    finish(nodes, nodes_path);
    finish(edges, edges_path);
}

void write_weights(const WeightVector& weights, std::ostream& out) {
    out << "# stranded_mass=" << format_real(weights.stranded_mass) << '\n';
    out << "# iterations=" << weights.iterations << '\n';
    out << "id,weight\n";
    for (std::size_t i = 0; i < weights.nodes.size(); ++i) {
        out << weights.nodes[i].value() << ',' << format_real(weights.weights[i]) << '\n';
    }
}

WeightVector read_weights(std::istream& in, const std::string& name) {
    CsvReader r(in, name);
    r.expect_header("id,weight");
    WeightVector w;
    std::vector<std::string_view> f;
    while (r.next(f)) {
        r.expect_fields(f, 2);
        const auto id = r.field<std::size_t>(f[0], "node id");
        if (!w.nodes.empty() && NodeId(id) <= w.nodes.back()) r.fail("ids must be strictly ascending");
        w.nodes.emplace_back(id);
        w.weights.push_back(r.field<double>(f[1], "weight"));
    }
    for (const auto& c : r.comments()) {
        const auto eq = c.find('=');
        if (eq == std::string::npos) continue;
        const std::string_view key = trim(std::string_view(c).substr(0, eq));
        const std::string_view value = trim(std::string_view(c).substr(eq + 1));
        if (key == "stranded_mass") {
            if (!parse_number(value, w.stranded_mass)) r.fail("invalid stranded_mass");
        } else if (key == "iterations") {
            if (!parse_number(value, w.iterations)) r.fail("invalid iterations");
        }
    }
    return w;
}

void save_weights(const WeightVector& weights, const std::filesystem::path& path) {
    auto out = open_out(path);
    write_weights(weights, out);
    finish(out, path);
}

WeightVector load_weights(const std::filesystem::path& path) {
    auto in = open_in(path);
    return read_weights(in, path.string());
}

void write_results(const std::vector<ResultRow>& rows, std::ostream& out) {
    out << "active_size,trials,mean_err_traditional,stderr_traditional,mean_err_weighted,"
           "stderr_weighted,stranded_fraction\n";
    for (const auto& r : rows) {
        out << r.active_size << ',' << r.trials << ',' << format_real(r.mean_err_traditional) << ','
            << format_real(r.stderr_traditional) << ',' << format_real(r.mean_err_weighted) << ','
            << format_real(r.stderr_weighted) << ',' << format_real(r.stranded_fraction) << '\n';
    }
}

std::vector<ResultRow> read_results(std::istream& in, const std::string& name) {
    CsvReader r(in, name);
    r.expect_header(
        "active_size,trials,mean_err_traditional,stderr_traditional,mean_err_weighted,"
        "stderr_weighted,stranded_fraction");
    std::vector<ResultRow> rows;
    std::vector<std::string_view> f;
    while (r.next(f)) {
        r.expect_fields(f, 7);
        ResultRow row;
        row.active_size = r.field<std::size_t>(f[0], "active_size");
        row.trials = r.field<std::size_t>(f[1], "trials");
        row.mean_err_traditional = r.field<double>(f[2], "mean_err_traditional");
        row.stderr_traditional = r.field<double>(f[3], "stderr_traditional");
        row.mean_err_weighted = r.field<double>(f[4], "mean_err_weighted");
        row.stderr_weighted = r.field<double>(f[5], "stderr_weighted");
        row.stranded_fraction = r.field<double>(f[6], "stranded_fraction");
        rows.push_back(row);
    }
    return rows;
}

void save_results(const std::vector<ResultRow>& rows, const std::filesystem::path& path) {
    auto out = open_out(path);
    write_results(rows, out);
    finish(out, path);
}

std::vector<ResultRow> load_results(const std::filesystem::path& path) {
    auto in = open_in(path);
    return read_results(in, path.string());
}

std::vector<NodeId> parse_id_list(std::string_view text) {
    std::vector<NodeId> ids;
    if (trim(text).empty()) return ids;
    for (auto field : split_fields(text)) {
        std::size_t id = 0;
        if (!parse_number(field, id)) {
            throw InvalidInput("invalid node id '" + std::string(field) + "'");
        }
        ids.emplace_back(id);
    }
    return ids;
}

std::vector<NodeId> read_id_file(const std::filesystem::path& path) {
    auto in = open_in(path);
    std::vector<NodeId> ids;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto t = trim(line);
        if (t.empty()) continue;
        std::size_t id = 0;
        if (!parse_number(t, id)) {
            throw ParseError(path.string(), line_no, "invalid node id '" + std::string(t) + "'");
        }
        ids.emplace_back(id);
    }
    return ids;
}

}  // namespace proxyvote
