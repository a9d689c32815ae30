#include "seqscan/io.hpp"

#include "seqscan/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace seqscan::io {

namespace fs = std::filesystem;

ReadSet& ReadTable::ensure(const std::string& chrom) {
    auto it = by_chrom.find(chrom);
    if (it == by_chrom.end()) {
        order.push_back(chrom);
        it = by_chrom.emplace(chrom, ReadSet{chrom, {}}).first;
    }
    return it->second;
}

void ReadTable::add(const std::string& chrom, Position pos) {
    ensure(chrom).positions.push_back(pos);
}

void ReadTable::sort_all() {
    for (auto& [chrom, rs] : by_chrom)
        std::sort(rs.positions.begin(), rs.positions.end());
}

namespace {

std::vector<std::string_view> split_tabs(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto tab = line.find('\t', start);
        out.push_back(line.substr(start, tab == std::string_view::npos ? std::string_view::npos : tab - start));
        if (tab == std::string_view::npos)
            break;
        start = tab + 1;
    }
    return out;
}

[[noreturn]] void parse_fail(const fs::path& path, std::size_t line_no, const std::string& what) {
    throw InputError(path.string() + ":" + std::to_string(line_no) + ": " + what);
}

Position parse_position(std::string_view field, const fs::path& path, std::size_t line_no) {
    Position value = 0;
    const auto* first = field.data();
    const auto* last = field.data() + field.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last)
        parse_fail(path, line_no, "invalid position '" + std::string(field) + "'");
    if (value < 1)
        parse_fail(path, line_no, "position must be >= 1 (coordinates are 1-based)");
    return value;
}

std::ifstream open_input(const fs::path& path) {
    std::ifstream in(path);
    if (!in)
        throw InputError("cannot open '" + path.string() + "'");
    return in;
}

std::string_view trim_cr(std::string_view s) {
    if (!s.empty() && s.back() == '\r')
        s.remove_suffix(1);
    return s;
}

} // namespace

ReadTable read_reads_tsv(const fs::path& path) {
    auto in = open_input(path);
    ReadTable table;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto view = trim_cr(line);
        if (view.empty() || view.front() == '#')
            continue;
        const auto f = split_tabs(view);
        if (f.size() < 2)
            parse_fail(path, line_no, "expected columns chrom, position");
        table.add(std::string(f[0]), parse_position(f[1], path, line_no));
    }
    table.sort_all();
    return table;
}

std::pair<ReadTable, ReadTable> read_labeled_reads_tsv(const fs::path& path) {
    auto in = open_input(path);
    ReadTable case_t, control_t;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto view = trim_cr(line);
        if (view.empty() || view.front() == '#')
            continue;
        const auto f = split_tabs(view);
        if (f.size() < 3)
            parse_fail(path, line_no, "expected columns chrom, position, label");
        const auto pos = parse_position(f[1], path, line_no);
        const std::string chrom(f[0]);
        // both tables list every chromosome so the samples stay aligned
        case_t.ensure(chrom);
        control_t.ensure(chrom);
        if (f[2] == "case") {
            case_t.add(chrom, pos);
        } else if (f[2] == "control") {
            control_t.add(chrom, pos);
        } else {
            parse_fail(path, line_no, "label must be 'case' or 'control', got '" + std::string(f[2]) + "'");
        }
    }
    case_t.sort_all();
    control_t.sort_all();
    return {std::move(case_t), std::move(control_t)};
}

std::string format_double(double v) {
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    if (std::isnan(v))
        return "nan";
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

void write_atomic(const fs::path& path, const std::string& contents) {
    if (path.has_parent_path())
        fs::create_directories(path.parent_path());
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw InputError("cannot write '" + tmp.string() + "'");
        out << contents;
        out.flush();
        if (!out)
            throw InputError("write failed for '" + tmp.string() + "'");
    }
    fs::rename(tmp, path);
}

std::string reads_tsv(const std::vector<ReadSet>& reads) {
    std::ostringstream os;
    os << "#chrom\tposition\n";
    for (const auto& rs : reads)
        for (Position p : rs.positions)
            os << rs.chromosome << '\t' << p << '\n';
    return os.str();
}

std::string truth_tsv(const std::vector<SpikeInTruth>& truth) {
    std::ostringstream os;
    os << "#chrom\tstart_bp\tend_bp\tmultiplier\n";
    for (const auto& t : truth)
        for (const auto& s : t.segments)
            os << t.chromosome << '\t' << s.start_bp << '\t' << s.end_bp << '\t' << format_double(s.multiplier) << '\n';
    return os.str();
}

std::vector<SpikeInTruth> read_truth_tsv(const fs::path& path) {
    auto in = open_input(path);
    std::vector<SpikeInTruth> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto view = trim_cr(line);
        if (view.empty() || view.front() == '#')
            continue;
        const auto f = split_tabs(view);
        if (f.size() < 4)
            parse_fail(path, line_no, "expected columns chrom, start_bp, end_bp, multiplier");
        const std::string chrom(f[0]);
        if (out.empty() || out.back().chromosome != chrom)
            out.push_back(SpikeInTruth{chrom, {}});
        double mult = 0.0;
        auto [ptr, ec] = std::from_chars(f[3].data(), f[3].data() + f[3].size(), mult);
        if (ec != std::errc{} || ptr != f[3].data() + f[3].size())
            parse_fail(path, line_no, "invalid multiplier '" + std::string(f[3]) + "'");
        out.back().segments.push_back(
            {parse_position(f[1], path, line_no), parse_position(f[2], path, line_no), mult});
    }
    return out;
}

std::string segments_tsv(const std::vector<ChromSegments>& rows) {
    std::ostringstream os;
    os << "#chrom\tstart_bp\tend_bp\tstart_idx\tend_idx\tn_case\tn_control\tp_hat\trel_cn\n";
    for (const auto& r : rows)
        for (const auto& s : r.segments)
            os << r.chrom << '\t' << s.start_bp << '\t' << s.end_bp << '\t' << s.start_idx << '\t' << s.end_idx
               << '\t' << s.n_case << '\t' << s.n_control << '\t' << format_double(s.p_hat) << '\t'
               << format_double(s.rel_cn) << '\n';
    return os.str();
}

std::string mbic_tsv(const std::vector<ChromCurve>& rows) {
    std::ostringstream os;
    os << "#chrom\tK\tmbic\n";
    for (const auto& r : rows)
        for (std::size_t k = 0; k < r.curve.values.size(); ++k)
            os << r.chrom << '\t' << k << '\t' << format_double(r.curve.values[k]) << '\n';
    return os.str();
}

std::string band_tsv(const std::vector<ChromBand>& rows) {
    std::ostringstream os;
    os << "#chrom\tposition\tp_lower\tp_point\tp_upper\trel_cn_lower\trel_cn_point\trel_cn_upper\n";
    for (const auto& r : rows) {
        const auto& b = r.band;
        for (std::size_t g = 0; g < b.grid.size(); ++g)
            os << r.chrom << '\t' << b.grid[g] << '\t' << format_double(b.lower[g]) << '\t'
               << format_double(b.point_est[g]) << '\t' << format_double(b.upper[g]) << '\t'
               << format_double(relative_copy_number(b.lower[g])) << '\t'
               << format_double(relative_copy_number(b.point_est[g])) << '\t'
               << format_double(relative_copy_number(b.upper[g])) << '\n';
    }
    return os.str();
}

std::string report_tsv(const std::vector<ReportRow>& rows) {
    std::ostringstream os;
    os << "#replicate\tn_true\tn_called\tn_matched\trecall\tprecision\n";
    for (const auto& r : rows)
        os << r.replicate << '\t' << r.report.n_true << '\t' << r.report.n_called << '\t' << r.report.pairs.size()
           << '\t' << format_double(r.report.recall) << '\t' << format_double(r.report.precision) << '\n';
    return os.str();
}

} // namespace seqscan::io
