#include "emofrnn/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_set>

#include "emofrnn/error.hpp"

namespace emofrnn {

std::string_view to_string(Emotion e)
{
    switch (e) {
    case Emotion::anger: return "anger";
    case Emotion::joy: return "joy";
    case Emotion::sadness: return "sadness";
    case Emotion::fear: return "fear";
    }
    return "?";
}

std::optional<Emotion> parse_emotion(std::string_view token)
{
    for (Emotion e : kAllEmotions)
        if (token == to_string(e))
            return e;
    return std::nullopt;
}

namespace {

std::vector<std::string_view> split_tabs(std::string_view line)
{
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    for (;;) {
        const auto tab = line.find('\t', start);
        if (tab == std::string_view::npos) {
            fields.push_back(line.substr(start));
            return fields;
        }
        fields.push_back(line.substr(start, tab - start));
        start = tab + 1;
    }
}

std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

// Leading integer of an intensity column such as "2: moderate amount of joy".
std::optional<long> leading_integer(std::string_view field)
{
    field = trim(field);
    const auto colon = field.find(':');
    const std::string_view head = trim(field.substr(0, colon));
    long value = 0;
    const auto [ptr, ec] = std::from_chars(head.data(), head.data() + head.size(), value);
    if (ec != std::errc{} || ptr != head.data() + head.size() || head.empty())
        return std::nullopt;
    return value;
}

std::string line_error(const std::string& what, std::size_t line_no)
{
    return what + " at line " + std::to_string(line_no);
}

bool getline_stripped(std::istream& in, std::string& line)
{
    if (!std::getline(in, line))
        return false;
    if (!line.empty() && line.back() == '\r')
        line.pop_back();
    return true;
}

}  // namespace

std::vector<Label> VectorDataset::labels() const
{
    std::vector<Label> out;
    out.reserve(instances.size());
    for (const auto& inst : instances)
        out.push_back(inst.label);
    return out;
}

VectorDataset VectorDataset::select(const std::vector<std::size_t>& indices) const
{
    VectorDataset out;
    out.dimension = dimension;
    out.instances.reserve(indices.size());
    for (std::size_t i : indices)
        out.instances.push_back(instances.at(i));
    return out;
}

std::vector<TextRecord> read_task_tsv(std::istream& in, bool require_labels)
{
    std::vector<TextRecord> records;
    std::unordered_set<std::string> seen;
    std::string line;
    std::size_t line_no = 0;
    while (getline_stripped(in, line)) {
        ++line_no;
        if (trim(line).empty())
            continue;
        const auto fields = split_tabs(line);
        if (fields.size() != 4)
            throw DataError(line_error("malformed row", line_no) + " (expected 4 tab-separated columns, got "
                            + std::to_string(fields.size()) + ")");

        const auto label = leading_integer(fields[3]);
        if (!label && records.empty() && line_no == 1) {
            const bool looks_like_header = require_labels || trim(fields[0]) == "ID";
            if (looks_like_header)
                continue;
        }

        TextRecord rec;
        rec.id = std::string(trim(fields[0]));
        if (rec.id.empty())
            throw DataError(line_error("malformed row (empty id)", line_no));
        if (!seen.insert(rec.id).second)
            throw DataError(line_error("duplicate id " + rec.id, line_no));
        rec.text = std::string(fields[1]);

        const auto emotion = parse_emotion(trim(fields[2]));
        if (!emotion)
            throw DataError(line_error("unknown affect dimension '" + std::string(trim(fields[2])) + "'",
                                       line_no));
        rec.emotion = *emotion;

        rec.label_field = std::string(fields[3]);
        if (label) {
            if (!is_valid_label(*label))
                throw DataError(line_error("malformed row (label " + std::to_string(*label)
                                               + " outside 0-3)",
                                           line_no));
            rec.label = static_cast<Label>(*label);
        } else if (require_labels) {
            throw DataError(line_error("malformed row (unparsable intensity class '"
                                           + std::string(fields[3]) + "')",
                                       line_no));
        }
        records.push_back(std::move(rec));
    }
    return records;
}

std::vector<TextRecord> load_task_tsv(const std::filesystem::path& path, bool require_labels)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw DataError("cannot open task file " + path.string());
    try {
        return read_task_tsv(in, require_labels);
    } catch (const DataError& e) {
        throw DataError(path.string() + ": " + e.what());
    }
}

void write_task_tsv(std::ostream& out, const std::vector<TextRecord>& records)
{
    out << "ID\tTweet\tAffect Dimension\tIntensity Class\n";
    for (const auto& r : records)
        out << r.id << '\t' << r.text << '\t' << to_string(r.emotion) << '\t' << r.label_field
            << '\n';
}

VectorTable read_vectors(std::istream& in)
{
    VectorTable table;
    std::string line;
    std::size_t line_no = 0;
    if (!getline_stripped(in, line))
        throw DataError("empty vector file (expected 'dim D' header)");
    ++line_no;
    {
        std::istringstream header(line);
        std::string tag;
        long dim = 0;
        std::string rest;
        if (!(header >> tag >> dim) || tag != "dim" || dim <= 0 || (header >> rest))
            throw DataError(line_error("malformed vector header (expected 'dim D')", line_no));
        table.dimension = static_cast<std::size_t>(dim);
    }

    while (getline_stripped(in, line)) {
        ++line_no;
        if (trim(line).empty())
            continue;
        const auto tab = line.find('\t');
        if (tab == std::string::npos)
            throw DataError(line_error("malformed vector row (missing tab)", line_no));
        std::string id(trim(std::string_view(line).substr(0, tab)));
        if (id.empty())
            throw DataError(line_error("malformed vector row (empty id)", line_no));

        Vector v;
        v.reserve(table.dimension);
        const char* p = line.data() + tab + 1;
        const char* end = line.data() + line.size();
        for (;;) {
            while (p < end && (*p == ' ' || *p == '\t'))
                ++p;
            if (p == end)
                break;
            double x = 0.0;
            const auto [next, ec] = std::from_chars(p, end, x);
            if (ec != std::errc{} || (next < end && *next != ' ' && *next != '\t')) {
                const char* tok_end = p;
                while (tok_end < end && *tok_end != ' ' && *tok_end != '\t')
                    ++tok_end;
                throw DataError(line_error("non-numeric token '" + std::string(p, tok_end) + "'",
                                           line_no));
            }
            v.push_back(x);
            p = next;
        }
        if (v.size() != table.dimension)
            throw DataError(line_error("expected " + std::to_string(table.dimension) + " floats, got "
                                           + std::to_string(v.size()),
                                       line_no));
        if (table.vectors.contains(id))
            throw DataError(line_error("duplicate id " + id, line_no));
        table.order.push_back(id);
        table.vectors.emplace(std::move(id), std::move(v));
    }
    return table;
}

VectorTable load_vectors(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw DataError("cannot open vector file " + path.string());
    try {
        return read_vectors(in);
    } catch (const DataError& e) {
        throw DataError(path.string() + ": " + e.what());
    }
}

void write_vectors(std::ostream& out, const VectorTable& table)
{
    const auto old_flags = out.flags();
    const auto old_precision = out.precision();
    out << "dim " << table.dimension << '\n';
    out << std::setprecision(9);
    for (const auto& id : table.order) {
        const auto& v = table.vectors.at(id);
        out << id << '\t';
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (i)
                out << ' ';
            out << v[i];
        }
        out << '\n';
    }
    out.flags(old_flags);
    out.precision(old_precision);
}

void save_vectors(const std::filesystem::path& path, const VectorTable& table)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw DataError("cannot write vector file " + path.string());
    write_vectors(out, table);
}

namespace {

const Vector& vector_for(const TextRecord& rec, const VectorTable& vectors)
{
    const auto it = vectors.vectors.find(rec.id);
    if (it == vectors.vectors.end())
        throw DataError("no vector for id " + rec.id);
    if (std::all_of(it->second.begin(), it->second.end(), [](double x) { return x == 0.0; }))
        throw DataError("zero vector for id " + rec.id);
    return it->second;
}

}  // namespace

std::vector<Vector> lookup_vectors(const std::vector<TextRecord>& records, const VectorTable& vectors)
{
    std::vector<Vector> out;
    out.reserve(records.size());
    for (const auto& rec : records)
        out.push_back(vector_for(rec, vectors));
    return out;
}

VectorDataset join(const std::vector<TextRecord>& records, const VectorTable& vectors)
{
    VectorDataset ds;
    ds.dimension = vectors.dimension;
    ds.instances.reserve(records.size());
    for (const auto& rec : records) {
        if (!rec.label)
            throw DataError("record " + rec.id + " has no intensity label");
        ds.instances.push_back({rec.id, vector_for(rec, vectors), *rec.label});
    }
    return ds;
}

VectorDataset merge(const VectorDataset& a, const VectorDataset& b)
{
    if (b.empty())
        return a;
    if (a.empty())
        return b;
    if (a.dimension != b.dimension)
        throw DataError("cannot merge datasets of dimension " + std::to_string(a.dimension) + " and "
                        + std::to_string(b.dimension));
    std::unordered_set<std::string> ids;
    for (const auto& inst : a.instances)
        ids.insert(inst.id);
    VectorDataset out = a;
    out.instances.reserve(a.size() + b.size());
    for (const auto& inst : b.instances) {
        if (ids.contains(inst.id))
            throw DataError("duplicate id " + inst.id + " in merged datasets");
        out.instances.push_back(inst);
    }
    return out;
}

ClassStats class_stats(const std::vector<Label>& labels)
{
    if (labels.empty())
        throw DataError("class statistics of an empty dataset");
    ClassStats stats;
    for (Label l : labels)
        ++stats.counts.at(static_cast<std::size_t>(l));
    stats.total = labels.size();
    const auto [lo, hi] = std::minmax_element(stats.counts.begin(), stats.counts.end());
    stats.smallest_class = *lo;
    stats.ir = *lo == 0 ? std::numeric_limits<double>::infinity()
                        : static_cast<double>(*hi) / static_cast<double>(*lo);
    return stats;
}

ClassStats class_stats(const VectorDataset& ds) { return class_stats(ds.labels()); }

}  // namespace emofrnn
