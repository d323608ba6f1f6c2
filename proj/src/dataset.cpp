#include "cnnbound/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_map>

#include "cnnbound/errors.hpp"

namespace cnnbound {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_commas(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(',', start);
        if (pos == std::string_view::npos) {
            out.push_back(trim(line.substr(start)));
            break;
        }
        out.push_back(trim(line.substr(start, pos - start)));
        start = pos + 1;
    }
    return out;
}

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

// Lexicographic order on coordinates; -0.0 and 0.0 compare equal.
struct CoordLess {
    bool operator()(const Point* a, const Point* b) const {
        return std::lexicographical_compare(a->begin(), a->end(), b->begin(), b->end());
    }
};

}  // namespace

Dataset::Dataset(std::vector<Point> coords, const std::vector<std::string>& labels) {
    if (coords.size() != labels.size()) {
        throw InputError("coordinate and label counts differ");
    }
    std::unordered_map<std::string, ClassId> ids;
    points_.reserve(coords.size());
    for (std::size_t i = 0; i < coords.size(); ++i) {
        auto [it, inserted] = ids.try_emplace(labels[i], classes_.size());
        if (inserted) {
            classes_.push_back(labels[i]);
        }
        points_.push_back({std::move(coords[i]), it->second});
    }
    dim_ = points_.empty() ? 0 : points_.front().coords.size();
    validate();
}

Dataset::Dataset(std::vector<LabeledPoint> points, std::vector<std::string> classes)
    : points_(std::move(points)), classes_(std::move(classes)) {
    dim_ = points_.empty() ? 0 : points_.front().coords.size();
    validate();
}

void Dataset::validate() const {
    if (points_.empty()) {
        throw InputError("dataset is empty");
    }
    if (dim_ == 0) {
        throw InputError("dataset has no feature columns");
    }
    for (std::size_t i = 0; i < points_.size(); ++i) {
        const auto& p = points_[i];
        if (p.coords.size() != dim_) {
            throw InputError("row " + std::to_string(i + 1) + " has dimension " +
                             std::to_string(p.coords.size()) + ", expected " +
                             std::to_string(dim_));
        }
        for (std::size_t j = 0; j < dim_; ++j) {
            if (!std::isfinite(p.coords[j])) {
                throw InputError("row " + std::to_string(i + 1) + " column " +
                                 std::to_string(j + 1) + " is not finite");
            }
        }
        if (p.label >= classes_.size()) {
            throw InputError("row " + std::to_string(i + 1) + " has a label outside the class alphabet");
        }
    }
    std::map<const Point*, std::size_t, CoordLess> seen;
    for (std::size_t i = 0; i < points_.size(); ++i) {
        auto [it, inserted] = seen.try_emplace(&points_[i].coords, i);
        if (!inserted && points_[it->second].label != points_[i].label) {
            throw InputError("conflicting duplicate: rows " + std::to_string(it->second + 1) +
                             " and " + std::to_string(i + 1) +
                             " have identical coordinates and different labels");
        }
    }
}

double Dataset::squared_diameter() const {
    double best = 0.0;
    for (std::size_t i = 0; i < points_.size(); ++i) {
        for (std::size_t j = i + 1; j < points_.size(); ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < dim_; ++k) {
                const double d = points_[i].coords[k] - points_[j].coords[k];
                s += d * d;
            }
            best = std::max(best, s);
        }
    }
    return best;
}

Dataset parse_csv(std::string_view text, std::string_view label_column, std::string_view source) {
    std::vector<std::string_view> lines;
    std::size_t start = 0;
    while (start <= text.size()) {
        auto pos = text.find('\n', start);
        if (pos == std::string_view::npos) {
            pos = text.size();
        }
        auto line = text.substr(start, pos - start);
        if (!trim(line).empty()) {
            lines.push_back(line);
        }
        start = pos + 1;
    }
    const std::string where(source);
    if (lines.empty()) {
        throw InputError(where + ": empty file");
    }
    const auto header = split_commas(lines.front());
    const auto label_it = std::find(header.begin(), header.end(), label_column);
    if (label_it == header.end()) {
        throw InputError(where + ": no column named '" + std::string(label_column) + "'");
    }
    const std::size_t label_col = static_cast<std::size_t>(label_it - header.begin());
    if (lines.size() == 1) {
        throw InputError(where + ": no data rows");
    }

    std::vector<Point> coords;
    std::vector<std::string> labels;
    for (std::size_t r = 1; r < lines.size(); ++r) {
        const auto fields = split_commas(lines[r]);
        if (fields.size() != header.size()) {
            throw InputError(where + ": row " + std::to_string(r) + " has " +
                             std::to_string(fields.size()) + " fields, header has " +
                             std::to_string(header.size()));
        }
        Point p;
        p.reserve(header.size() - 1);
        for (std::size_t c = 0; c < fields.size(); ++c) {
            if (c == label_col) {
                continue;
            }
            const auto f = fields[c];
            double v = 0.0;
            const char* first = f.data();
            if (!f.empty() && *first == '+') {
                ++first;
            }
            const auto res = std::from_chars(first, f.data() + f.size(), v);
            if (f.empty() || res.ec != std::errc() || res.ptr != f.data() + f.size() || !std::isfinite(v)) {
                throw InputError(where + ": row " + std::to_string(r) + ", column '" +
                                 std::string(header[c]) + "': cannot parse '" + std::string(f) +
                                 "' as a finite real number");
            }
            p.push_back(v);
        }
        coords.push_back(std::move(p));
        labels.emplace_back(fields[label_col]);
    }
    try {
        return Dataset(std::move(coords), labels);
    } catch (const InputError& e) {
        throw InputError(where + ": " + e.what());
    }
}

Dataset load_csv(const std::filesystem::path& path, std::string_view label_column) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw InputError("cannot open " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_csv(buf.str(), label_column, path.string());
}

std::string to_csv(const Dataset& data, std::string_view label_column) {
    std::string out;
    for (std::size_t j = 0; j < data.dim(); ++j) {
        out += "x" + std::to_string(j) + ",";
    }
    out += label_column;
    out += '\n';
    for (const auto& p : data.points()) {
        for (double v : p.coords) {
            out += format_double(v);
            out += ',';
        }
        out += data.class_name(p.label);
        out += '\n';
    }
    return out;
}

void write_csv(const Dataset& data, const std::filesystem::path& path, std::string_view label_column) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw InputError("cannot write " + path.string());
    }
    out << to_csv(data, label_column);
}

namespace {

struct ClassTable {
    std::vector<std::string> names;
    std::vector<ClassId> center_labels;
};

ClassTable classes_of(const std::vector<BlobCenter>& centers) {
    ClassTable t;
    for (const auto& c : centers) {
        auto it = std::find(t.names.begin(), t.names.end(), c.label);
        if (it == t.names.end()) {
            t.center_labels.push_back(t.names.size());
            t.names.push_back(c.label);
        } else {
            t.center_labels.push_back(static_cast<ClassId>(it - t.names.begin()));
        }
    }
    return t;
}

void check_blob_args(const std::vector<BlobCenter>& centers, double spread) {
    if (centers.empty()) {
        throw InputError("at least one blob center is required");
    }
    if (!(spread > 0.0) || !std::isfinite(spread)) {
        throw InputError("blob spread must be positive");
    }
    const auto d = centers.front().center.size();
    if (d == 0) {
        throw InputError("blob centers must have at least one coordinate");
    }
    for (const auto& c : centers) {
        if (c.center.size() != d) {
            throw InputError("blob centers differ in dimension");
        }
    }
}

Point sample_around(Rng& rng, const Point& center, double spread) {
    Point p(center.size());
    for (std::size_t k = 0; k < center.size(); ++k) {
        p[k] = center[k] + spread * rng.normal();
    }
    return p;
}

// Tracks labels by exact coordinates so generators can resample conflicts.
class ConflictGuard {
public:
    bool conflicts(const Point& p, ClassId label) const {
        auto it = seen_.find(p);
        return it != seen_.end() && it->second != label;
    }
    void add(const Point& p, ClassId label) { seen_.emplace(p, label); }

private:
    std::map<Point, ClassId> seen_;
};

}  // namespace

Dataset generate_blobs(std::uint64_t seed, std::size_t n_per_class,
                       const std::vector<BlobCenter>& centers, double spread) {
    check_blob_args(centers, spread);
    if (n_per_class == 0) {
        throw InputError("n_per_class must be positive");
    }
    const auto table = classes_of(centers);
    Rng rng(seed);
    ConflictGuard guard;
    std::vector<LabeledPoint> points;
    points.reserve(n_per_class * centers.size());
    for (std::size_t j = 0; j < n_per_class; ++j) {
        for (std::size_t c = 0; c < centers.size(); ++c) {
            const ClassId label = table.center_labels[c];
            Point p;
            do {
                p = sample_around(rng, centers[c].center, spread);
            } while (guard.conflicts(p, label));
            guard.add(p, label);
            points.push_back({std::move(p), label});
        }
    }
    return Dataset(std::move(points), table.names);
}

Dataset generate_uniform(std::uint64_t seed, std::size_t n, std::size_t dim, std::size_t num_classes) {
    if (n == 0 || dim == 0 || num_classes == 0) {
        throw InputError("generate_uniform needs n, dim and num_classes all positive");
    }
    Rng rng(seed);
    ConflictGuard guard;
    std::vector<std::string> classes;
    for (std::size_t c = 0; c < num_classes; ++c) {
        classes.push_back("c" + std::to_string(c));
    }
    std::vector<LabeledPoint> points;
    for (std::size_t i = 0; i < n; ++i) {
        const ClassId label = rng.below(num_classes);
        Point p(dim);
        do {
            for (auto& v : p) {
                v = rng.uniform();
            }
        } while (guard.conflicts(p, label));
        guard.add(p, label);
        points.push_back({std::move(p), label});
    }
    return Dataset(std::move(points), std::move(classes));
}

BlobStream::BlobStream(std::uint64_t seed, std::vector<BlobCenter> centers, double spread)
    : centers_(std::move(centers)), spread_(spread), dim_(0), rng_(seed) {
    check_blob_args(centers_, spread_);
    auto table = classes_of(centers_);
    center_labels_ = std::move(table.center_labels);
    classes_ = std::move(table.names);
    dim_ = centers_.front().center.size();
}

LabeledPoint BlobStream::next() {
    const auto c = rng_.below(centers_.size());
    return {sample_around(rng_, centers_[c].center, spread_), center_labels_[c]};
}

std::vector<BlobCenter> parse_centers(std::string_view text) {
    std::vector<BlobCenter> out;
    std::size_t start = 0;
    while (start < text.size()) {
        auto end = text.find(';', start);
        if (end == std::string_view::npos) {
            end = text.size();
        }
        const auto item = trim(text.substr(start, end - start));
        start = end + 1;
        if (item.empty()) {
            continue;
        }
        const auto colon = item.rfind(':');
        if (colon == std::string_view::npos) {
            throw InputError("center '" + std::string(item) + "' is missing ':LABEL'");
        }
        BlobCenter c;
        c.label = std::string(trim(item.substr(colon + 1)));
        for (auto f : split_commas(item.substr(0, colon))) {
            double v = 0.0;
            const auto res = std::from_chars(f.data(), f.data() + f.size(), v);
            if (f.empty() || res.ec != std::errc() || res.ptr != f.data() + f.size()) {
                throw InputError("cannot parse center coordinate '" + std::string(f) + "'");
            }
            c.center.push_back(v);
        }
        out.push_back(std::move(c));
    }
    if (out.empty()) {
        throw InputError("no blob centers given");
    }
    return out;
}

}  // namespace cnnbound
