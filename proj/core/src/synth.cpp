#include "cgebd/synth.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cgebd/rng.hpp"

namespace cgebd {

void SynthSpec::validate() const {
    if (num_frames < 1) throw std::invalid_argument("SynthSpec: num_frames must be >= 1");
    if (!(fps > 0.0f)) throw std::invalid_argument("SynthSpec: fps must be > 0");
    if (width < 8 || height < 8) throw std::invalid_argument("SynthSpec: frame too small");
    if (max_speed < 0) throw std::invalid_argument("SynthSpec: max_speed must be >= 0");
    if (min_object_size < 2 || max_object_size < min_object_size ||
        max_object_size >= std::min(width, height))
        throw std::invalid_argument("SynthSpec: object size range invalid");
    int prev = -1000;
    for (const SynthEvent& e : events) {
        if (e.frame <= 0 || e.frame >= num_frames)
            throw std::invalid_argument("SynthSpec: event frame outside (0, num_frames)");
        if (e.frame <= prev) throw std::invalid_argument("SynthSpec: event frames not strictly increasing");
        if (prev > 0 && e.frame - prev < 4) throw std::invalid_argument("SynthSpec: events closer than 4 frames");
        prev = e.frame;
    }
}

namespace {

struct Scene {
    int start = 0;  // first frame of the scene
    int end = 0;    // one past the last frame
    std::vector<int> reversal_frames;
};

struct ObjectPlan {
    std::vector<uint8_t> texture;  // 3 * h * w
    int obj_w = 0, obj_h = 0;
    std::vector<int> pos_y;  // per frame offset of the scene
    std::vector<int> pos_x;
};

std::vector<uint8_t> noise_plane(Rng& rng, int width, int height) {
    std::vector<uint8_t> plane(static_cast<size_t>(3) * width * height);
    int base[3];
    int amp[3];
    for (int c = 0; c < 3; ++c) {
        base[c] = rng.uniform_int(48, 208);
        amp[c] = rng.uniform_int(24, 48);
    }
    for (size_t p = 0; p < plane.size() / 3; ++p) {
        for (int c = 0; c < 3; ++c) {
            const int v = base[c] + rng.uniform_int(-amp[c], amp[c]);
            plane[p * 3 + c] = static_cast<uint8_t>(std::clamp(v, 0, 255));
        }
    }
    return plane;
}

// Picks the largest per-axis speed (<= max_speed) whose folded trajectory fits
// the roaming range, then a feasible start position.
void plan_axis(Rng& rng, const std::vector<int>& signs, int roam, int max_speed,
               std::vector<int>& positions) {
    const int len = static_cast<int>(signs.size());
    int speed = max_speed;
    int lo = 0, hi = 0;
    for (; speed >= 0; --speed) {
        int disp = 0;
        lo = 0;
        hi = 0;
        for (int f = 1; f < len; ++f) {
            disp += speed * signs[static_cast<size_t>(f)];
            lo = std::min(lo, disp);
            hi = std::max(hi, disp);
        }
        if (hi - lo <= roam) break;
    }
    const int dir = rng.uniform_int(0, 1) == 0 ? 1 : -1;
    if (dir < 0) {
        // Mirror the displacement profile.
        std::swap(lo, hi);
        lo = -lo;
        hi = -hi;
    }
    const int start = rng.uniform_int(-lo, roam - hi);
    positions.resize(static_cast<size_t>(len));
    int disp = 0;
    positions[0] = start;
    for (int f = 1; f < len; ++f) {
        disp += dir * speed * signs[static_cast<size_t>(f)];
        positions[static_cast<size_t>(f)] = start + disp;
    }
}

ObjectPlan plan_scene_object(Rng& rng, const Scene& scene, const SynthSpec& spec) {
    ObjectPlan plan;
    plan.obj_w = rng.uniform_int(spec.min_object_size, spec.max_object_size);
    plan.obj_h = rng.uniform_int(spec.min_object_size, spec.max_object_size);
    plan.texture = noise_plane(rng, plan.obj_w, plan.obj_h);

    const int len = scene.end - scene.start;
    // signs[f] = velocity sign multiplier applied between frame f-1 and f.
    std::vector<int> signs(static_cast<size_t>(len), 1);
    int sign = 1;
    for (int f = 1; f < len; ++f) {
        const int abs_frame = scene.start + f;
        if (std::find(scene.reversal_frames.begin(), scene.reversal_frames.end(), abs_frame) !=
            scene.reversal_frames.end())
            sign = -sign;
        signs[static_cast<size_t>(f)] = sign;
    }
    plan_axis(rng, signs, spec.height - plan.obj_h, spec.max_speed, plan.pos_y);
    plan_axis(rng, signs, spec.width - plan.obj_w, spec.max_speed, plan.pos_x);
    return plan;
}

}  // namespace

std::pair<RawVideo, BoundaryAnnotation> generate_video(const SynthSpec& spec,
                                                       const std::string& video_id, int speed_cap) {
    spec.validate();
    if (spec.max_speed > speed_cap)
        throw std::invalid_argument("generate_video: object speed exceeds the codec search radius");

    // Cuts delimit scenes; reversals stay inside them.
    std::vector<Scene> scenes;
    Scene current;
    current.start = 0;
    for (const SynthEvent& e : spec.events) {
        if (e.kind == EventKind::Cut) {
            current.end = e.frame;
            scenes.push_back(current);
            current = Scene{};
            current.start = e.frame;
        } else {
            current.reversal_frames.push_back(e.frame);
        }
    }
    current.end = spec.num_frames;
    scenes.push_back(current);

    Rng rng(spec.seed);
    RawVideo video;
    video.width = spec.width;
    video.height = spec.height;
    video.fps = spec.fps;
    video.frames.resize(static_cast<size_t>(spec.num_frames));

    for (const Scene& scene : scenes) {
        const std::vector<uint8_t> background = noise_plane(rng, spec.width, spec.height);
        const ObjectPlan plan = plan_scene_object(rng, scene, spec);
        for (int f = scene.start; f < scene.end; ++f) {
            FramePlane frame = background;
            const int oy = plan.pos_y[static_cast<size_t>(f - scene.start)];
            const int ox = plan.pos_x[static_cast<size_t>(f - scene.start)];
            for (int y = 0; y < plan.obj_h; ++y) {
                const size_t src = static_cast<size_t>(y) * plan.obj_w * 3;
                const size_t dst = (static_cast<size_t>(oy + y) * spec.width + ox) * 3;
                std::copy(plan.texture.begin() + src, plan.texture.begin() + src + plan.obj_w * 3,
                          frame.begin() + dst);
            }
            video.frames[static_cast<size_t>(f)] = std::move(frame);
        }
    }

    BoundaryAnnotation ann;
    ann.video_id = video_id;
    ann.fps = spec.fps;
    ann.num_frames = spec.num_frames;
    for (const SynthEvent& e : spec.events)
        ann.boundaries_sec.push_back(e.frame / static_cast<double>(spec.fps));
    return {std::move(video), std::move(ann)};
}

SynthSpec make_corpus_spec(uint64_t corpus_seed, int index, const CorpusParams& params) {
    Rng rng(mix_seed(corpus_seed, static_cast<uint64_t>(index)));

    SynthSpec spec;
    spec.seed = rng.next();
    spec.num_frames = params.num_frames;
    spec.fps = params.fps;
    spec.width = params.width;
    spec.height = params.height;
    spec.max_speed = params.max_speed;

    const int gap = std::max(params.min_event_gap, 4);
    const int lo = std::min(3, params.num_frames - 1);
    const int hi = std::max(lo, params.num_frames - 3);
    const int max_count = (hi - lo) / gap + 1;
    const int count = std::min(rng.uniform_int(params.min_events, params.max_events), max_count);
    std::vector<int> frames;
    for (int attempt = 0; attempt < 200 && static_cast<int>(frames.size()) < count; ++attempt) {
        frames.clear();
        for (int i = 0; i < count; ++i) frames.push_back(rng.uniform_int(lo, hi));
        std::sort(frames.begin(), frames.end());
        bool ok = true;
        for (size_t i = 1; i < frames.size(); ++i)
            if (frames[i] - frames[i - 1] < gap) ok = false;
        if (!ok) frames.clear();
    }
    if (static_cast<int>(frames.size()) < count) {
        // Rejection gave up; fall back to a maximally spread plan.
        frames.clear();
        for (int i = 0; i < count; ++i) frames.push_back(lo + i * gap);
    }
    for (int f : frames) {
        SynthEvent e;
        e.frame = f;
        e.kind = rng.uniform_int(0, 1) == 0 ? EventKind::Cut : EventKind::MotionReversal;
        spec.events.push_back(e);
    }
    return spec;
}

}  // namespace cgebd
