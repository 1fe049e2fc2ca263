#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "cgebd/metrics.hpp"
#include "cgebd/video.hpp"

namespace cgebd {

enum class EventKind { Cut, MotionReversal };

struct SynthEvent {
    int frame = 0;
    EventKind kind = EventKind::Cut;
};

struct SynthSpec {
    uint64_t seed = 0;
    int num_frames = 48;
    float fps = 12.0f;
    int width = 64;
    int height = 64;
    std::vector<SynthEvent> events;  // strictly increasing, >= 4 apart, in (0, num_frames)
    int max_speed = 2;               // per-axis object speed, pixels/frame
    int min_object_size = 12;
    int max_object_size = 16;

    void validate() const;
};

// Renders a textured rectangle moving at constant integer velocity over a
// static noise background. A cut reseeds the whole scene; a motion reversal
// negates the velocity. Start positions are chosen so the object never
// leaves the frame, keeping interior object blocks exactly
// motion-compensable. Identical specs produce identical pixels.
// speed_cap is the codec search radius the object speed must not exceed.
std::pair<RawVideo, BoundaryAnnotation> generate_video(const SynthSpec& spec,
                                                       const std::string& video_id,
                                                       int speed_cap = 8);

struct CorpusParams {
    int num_frames = 48;
    float fps = 12.0f;
    int width = 64;
    int height = 64;
    int min_events = 1;
    int max_events = 3;
    int min_event_gap = 8;  // corpus default, stricter than the >= 4 invariant
    int max_speed = 2;
};

// Spec for video `index` of a corpus; the per-video stream is derived from
// (corpus_seed, index) so videos are independent and reproducible.
SynthSpec make_corpus_spec(uint64_t corpus_seed, int index, const CorpusParams& params);

}  // namespace cgebd
