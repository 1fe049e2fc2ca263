#include "cgebd/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "cgebd/errors.hpp"

namespace cgebd {

using nlohmann::json;

void BoundaryAnnotation::validate() const {
    if (video_id.empty()) throw DataError("annotation: empty video_id");
    if (!(fps > 0.0f)) throw DataError("annotation " + video_id + ": fps must be > 0");
    if (num_frames < 1) throw DataError("annotation " + video_id + ": num_frames must be >= 1");
    const double dur = duration();
    double prev = -1.0;
    for (double b : boundaries_sec) {
        if (b < 0.0 || b > dur)
            throw DataError("annotation " + video_id + ": boundary outside [0, duration]");
        if (b < prev) throw DataError("annotation " + video_id + ": boundaries not sorted");
        prev = b;
    }
}

double relative_distance(double pred, double gt, double duration) {
    if (!(duration > 0.0)) throw std::invalid_argument("relative_distance: duration must be > 0");
    return std::abs(pred - gt) / duration;
}

MatchResult match_one_to_one(const std::vector<double>& preds, const std::vector<double>& gts,
                             double duration, double tau) {
    if (!(duration > 0.0)) throw std::invalid_argument("match_one_to_one: duration must be > 0");
    if (!std::is_sorted(preds.begin(), preds.end()))
        throw std::invalid_argument("match_one_to_one: predictions not sorted");
    if (!std::is_sorted(gts.begin(), gts.end()))
        throw std::invalid_argument("match_one_to_one: ground truth not sorted");

    // Two-cursor sweep: match when eligible, otherwise drop the earlier
    // timestamp. Eligibility windows are intervals, so this reaches the
    // maximum matching (property-tested against exhaustive search).
    MatchResult r;
    size_t i = 0, j = 0;
    while (i < preds.size() && j < gts.size()) {
        if (relative_distance(preds[i], gts[j], duration) <= tau) {
            ++r.tp;
            ++i;
            ++j;
        } else if (preds[i] < gts[j]) {
            ++i;
        } else {
            ++j;
        }
    }
    r.fp = static_cast<int>(preds.size()) - r.tp;
    r.fn = static_cast<int>(gts.size()) - r.tp;
    r.precision = preds.empty() ? 0.0 : static_cast<double>(r.tp) / static_cast<double>(preds.size());
    r.recall = gts.empty() ? 0.0 : static_cast<double>(r.tp) / static_cast<double>(gts.size());
    r.f1 = (r.precision + r.recall) > 0.0 ? 2.0 * r.precision * r.recall / (r.precision + r.recall) : 0.0;
    return r;
}

std::vector<double> reldis_thresholds() {
    std::vector<double> t;
    for (int i = 1; i <= 10; ++i) t.push_back(0.05 * i);
    return t;
}

EvalReport score_corpus(const std::vector<VideoPredictions>& predictions,
                        const std::vector<BoundaryAnnotation>& annotations) {
    std::map<std::string, const BoundaryAnnotation*> by_id;
    for (const auto& a : annotations) {
        a.validate();
        by_id[a.video_id] = &a;
    }

    EvalReport report;
    report.thresholds = reldis_thresholds();
    for (double tau : report.thresholds) {
        long tp = 0, npred = 0, ngt = 0;
        for (const auto& p : predictions) {
            auto it = by_id.find(p.video_id);
            if (it == by_id.end()) throw DataError("score_corpus: no annotation for video \"" + p.video_id + "\"");
            const BoundaryAnnotation& ann = *it->second;
            const MatchResult m = match_one_to_one(p.boundaries_sec, ann.boundaries_sec, ann.duration(), tau);
            tp += m.tp;
            npred += static_cast<long>(p.boundaries_sec.size());
            ngt += static_cast<long>(ann.boundaries_sec.size());
        }
        const double prec = npred > 0 ? static_cast<double>(tp) / static_cast<double>(npred) : 0.0;
        const double rec = ngt > 0 ? static_cast<double>(tp) / static_cast<double>(ngt) : 0.0;
        const double f1 = (prec + rec) > 0.0 ? 2.0 * prec * rec / (prec + rec) : 0.0;
        report.precision.push_back(prec);
        report.recall.push_back(rec);
        report.f1.push_back(f1);
    }
    double sum = 0.0;
    for (double f : report.f1) sum += f;
    report.avg_f1 = sum / static_cast<double>(report.f1.size());
    return report;
}

std::string render_report_table(const EvalReport& report) {
    std::ostringstream os;
    char buf[32];
    os << "Rel.Dis. threshold";
    for (double t : report.thresholds) {
        std::snprintf(buf, sizeof(buf), "%7.2f", t);
        os << buf;
    }
    os << "    avg\n";
    auto row = [&](const char* name, const std::vector<double>& vals, double avg, bool with_avg) {
        os << name;
        for (double v : vals) {
            std::snprintf(buf, sizeof(buf), "%7.3f", v);
            os << buf;
        }
        if (with_avg) {
            std::snprintf(buf, sizeof(buf), "%7.3f", avg);
            os << buf;
        }
        os << "\n";
    };
    row("precision         ", report.precision, 0.0, false);
    row("recall            ", report.recall, 0.0, false);
    row("F1                ", report.f1, report.avg_f1, true);
    return os.str();
}

std::string report_to_json(const EvalReport& report) {
    json j;
    j["thresholds"] = report.thresholds;
    j["precision"] = report.precision;
    j["recall"] = report.recall;
    j["f1"] = report.f1;
    j["avg_f1"] = report.avg_f1;
    j["matching"] = "one-to-one maximum (greedy sweep)";
    j["aggregation"] = "corpus-summed tp/fp/fn";
    return j.dump(2) + "\n";
}

std::vector<BoundaryAnnotation> load_annotations(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open annotation file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw DataError(path + ": invalid JSON: " + e.what());
    }
    if (!j.is_array()) throw DataError(path + ": expected a JSON array of annotations");

    std::vector<BoundaryAnnotation> out;
    for (const auto& item : j) {
        BoundaryAnnotation a;
        try {
            a.video_id = item.at("video_id").get<std::string>();
            a.fps = item.at("fps").get<float>();
            a.num_frames = item.at("num_frames").get<int>();
            a.boundaries_sec = item.at("boundaries_sec").get<std::vector<double>>();
        } catch (const json::exception& e) {
            throw DataError(path + ": bad annotation entry: " + e.what());
        }
        a.validate();
        out.push_back(std::move(a));
    }
    return out;
}

void save_annotations(const std::vector<BoundaryAnnotation>& annotations, const std::string& path) {
    json j = json::array();
    for (const auto& a : annotations) {
        j.push_back({{"video_id", a.video_id},
                     {"fps", a.fps},
                     {"num_frames", a.num_frames},
                     {"boundaries_sec", a.boundaries_sec}});
    }
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw DataError("cannot open file for writing: " + path);
    out << j.dump(2) << "\n";
    if (!out) throw DataError("failed to write annotation file: " + path);
}

std::vector<VideoPredictions> load_predictions_jsonl(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open predictions file: " + path);
    std::vector<VideoPredictions> out;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        json j;
        try {
            j = json::parse(line);
            VideoPredictions p;
            p.video_id = j.at("video_id").get<std::string>();
            p.boundaries_sec = j.at("boundaries_sec").get<std::vector<double>>();
            p.scores = j.at("scores").get<std::vector<double>>();
            out.push_back(std::move(p));
        } catch (const json::exception& e) {
            throw DataError(path + ":" + std::to_string(lineno) + ": bad prediction line: " + e.what());
        }
    }
    return out;
}

void save_predictions_jsonl(const std::vector<VideoPredictions>& predictions, const std::string& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw DataError("cannot open file for writing: " + path);
    for (const auto& p : predictions) {
        json j{{"video_id", p.video_id}, {"boundaries_sec", p.boundaries_sec}, {"scores", p.scores}};
        out << j.dump() << "\n";
    }
    if (!out) throw DataError("failed to write predictions file: " + path);
}

}  // namespace cgebd
