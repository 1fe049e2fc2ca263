#pragma once

#include <string>
#include <vector>

namespace cgebd {

struct BoundaryAnnotation {
    std::string video_id;
    float fps = 0.0f;
    int num_frames = 0;
    std::vector<double> boundaries_sec;  // sorted ascending

    double duration() const { return num_frames / static_cast<double>(fps); }
    void validate() const;  // throws DataError
};

struct VideoPredictions {
    std::string video_id;
    std::vector<double> boundaries_sec;  // sorted ascending
    std::vector<double> scores;          // raw per-position score track
};

// Rel.Dis. = |pred - gt| / duration.
double relative_distance(double pred, double gt, double duration);

struct MatchResult {
    int tp = 0;
    int fp = 0;
    int fn = 0;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

// Maximum-cardinality one-to-one matching under |pred - gt| <= tau * duration,
// computed by a two-cursor greedy sweep (equal to exhaustive maximum matching
// on interval eligibility). Inputs must be sorted ascending.
MatchResult match_one_to_one(const std::vector<double>& preds, const std::vector<double>& gts,
                             double duration, double tau);

struct EvalReport {
    std::vector<double> thresholds;  // 0.05, 0.10, ..., 0.50
    std::vector<double> precision;
    std::vector<double> recall;
    std::vector<double> f1;
    double avg_f1 = 0.0;
};

// tp/fp/fn are summed across the corpus per threshold before computing
// precision/recall/F1 (global aggregation).
EvalReport score_corpus(const std::vector<VideoPredictions>& predictions,
                        const std::vector<BoundaryAnnotation>& annotations);

std::vector<double> reldis_thresholds();  // the ten standard thresholds

std::string render_report_table(const EvalReport& report);
std::string report_to_json(const EvalReport& report);

// Annotation file: one JSON array of {"video_id","fps","num_frames","boundaries_sec"}.
std::vector<BoundaryAnnotation> load_annotations(const std::string& path);
void save_annotations(const std::vector<BoundaryAnnotation>& annotations, const std::string& path);

// Predictions: JSON lines, one {"video_id","boundaries_sec","scores"} per video.
std::vector<VideoPredictions> load_predictions_jsonl(const std::string& path);
void save_predictions_jsonl(const std::vector<VideoPredictions>& predictions, const std::string& path);

}  // namespace cgebd
