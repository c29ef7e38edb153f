#include "tsca/grid2d.hpp"

#include <algorithm>

namespace tsca {

// ------------------------------------------------------------------ billiard

namespace {

// Indexed by BlockCode. Crowded blocks (three or four balls) and adjacent
// pairs are fixed points.
constexpr std::array<BlockCode, 16> kBilliardBlockTable = {
    0,  // empty
    8,  // TL -> BR
    4,  // TR -> BL
    3,  // TL TR
    2,  // BL -> TR
    5,  // TL BL
    9,  // TR BL -> TL BR
    7,  //
    1,  // BR -> TL
    6,  // TL BR -> TR BL
    10, // TR BR
    11, //
    12, // BL BR
    13, //
    14, //
    15, //
};

Arrow primary_arrow(std::int64_t x, std::int64_t y) {
    const bool right = (x & 1) != 0;
    const bool bottom = (y & 1) != 0;
    if (!right && !bottom) {
        return Arrow::SE;
    }
    if (right && !bottom) {
        return Arrow::SW;
    }
    if (!right && bottom) {
        return Arrow::NE;
    }
    return Arrow::NW;
}

} // namespace

Arrow opposite(Arrow a) {
    switch (a) {
    case Arrow::NE: return Arrow::SW;
    case Arrow::SE: return Arrow::NW;
    case Arrow::SW: return Arrow::NE;
    case Arrow::NW: return Arrow::SE;
    }
    return a;
}

BlockCode billiard_block_rule(BlockCode block) {
    return kBilliardBlockTable[block & 0xF];
}

BilliardGrid make_billiard(int width, int height, Partition partition) {
    if (width % 2 != 0 || height % 2 != 0) {
        throw InvalidInput("billiard torus needs even width and height");
    }
    BilliardGrid g(width, height);
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            const Arrow a = primary_arrow(x, y);
            g.at(x, y).arrow = partition == Partition::Primary ? a : opposite(a);
        }
    }
    return g;
}

std::optional<Partition> arrow_partition(const BilliardGrid& g) {
    if (g.width() % 2 != 0 || g.height() % 2 != 0) {
        return std::nullopt;
    }
    bool primary = true;
    bool alternate = true;
    for (int y = 0; y < g.height(); ++y) {
        for (int x = 0; x < g.width(); ++x) {
            const Arrow want = primary_arrow(x, y);
            const Arrow got = g.at(x, y).arrow;
            primary = primary && got == want;
            alternate = alternate && got == opposite(want);
        }
    }
    if (primary) {
        return Partition::Primary;
    }
    if (alternate) {
        return Partition::Alternate;
    }
    return std::nullopt;
}

BilliardGrid billiard_step(const BilliardGrid& g) {
    const auto partition = arrow_partition(g);
    if (!partition) {
        throw InvalidInput("billiard_step: invalid arrow layer");
    }
    const int origin = *partition == Partition::Primary ? 0 : 1;
    BilliardGrid next = g;
    for (int by = origin; by < g.height() + origin; by += 2) {
        for (int bx = origin; bx < g.width() + origin; bx += 2) {
            const std::array<std::array<int, 2>, 4> corner = {{{bx, by}, {bx + 1, by}, {bx, by + 1}, {bx + 1, by + 1}}};
            BlockCode code = 0;
            for (int k = 0; k < 4; ++k) {
                if (g.at(corner[k][0], corner[k][1]).color == Color::Black) {
                    code |= static_cast<BlockCode>(1 << k);
                }
            }
            const BlockCode out = billiard_block_rule(code);
            for (int k = 0; k < 4; ++k) {
                next.at(corner[k][0], corner[k][1]).color = ((out >> k) & 1) != 0 ? Color::Black : Color::White;
            }
        }
    }
    return arrow_flip(next);
}

BilliardGrid arrow_flip(const BilliardGrid& g) {
    BilliardGrid out = g;
    for (int y = 0; y < g.height(); ++y) {
        for (int x = 0; x < g.width(); ++x) {
            out.at(x, y).arrow = opposite(g.at(x, y).arrow);
        }
    }
    return out;
}

std::size_t count_black(const BilliardGrid& g) {
    return static_cast<std::size_t>(std::count_if(g.cells().begin(), g.cells().end(),
                                                   [](const BilliardCell& c) { return c.color == Color::Black; }));
}

// ---------------------------------------------------------------------- ant

std::array<int, 2> unit(Heading h) {
    switch (h) {
    case Heading::North: return {0, -1};
    case Heading::East: return {1, 0};
    case Heading::South: return {0, 1};
    case Heading::West: return {-1, 0};
    }
    return {0, 0};
}

Heading turn_right(Heading h) {
    return static_cast<Heading>((static_cast<int>(h) + 1) % 4);
}

Heading turn_left(Heading h) {
    return static_cast<Heading>((static_cast<int>(h) + 3) % 4);
}

namespace {

Heading turn(Heading h, Color c, TurnConvention conv) {
    const bool right = (c == Color::White) == (conv == TurnConvention::WhiteRight);
    return right ? turn_right(h) : turn_left(h);
}

std::optional<Heading> heading_of(int dx, int dy) {
    for (Heading h : {Heading::North, Heading::East, Heading::South, Heading::West}) {
        const auto u = unit(h);
        if (u[0] == dx && u[1] == dy) {
            return h;
        }
    }
    return std::nullopt;
}

int wrap_delta(int d, int size) {
    d %= size;
    if (d > size / 2) {
        d -= size;
    }
    if (d < -(size - 1) / 2) {
        d += size;
    }
    return d;
}

} // namespace

AntState ant_initial(int width, int height) {
    AntState s;
    s.colors = TorusGrid<Color>(width, height, Color::White);
    s.x = width / 2;
    s.y = height / 2;
    s.heading = Heading::North;
    return s;
}

AntState ant_oracle_step(const AntState& s, TurnConvention conv) {
    AntState n = s;
    const Color here = s.colors.at(s.x, s.y);
    n.heading = turn(s.heading, here, conv);
    n.colors.at(s.x, s.y) = flip(here);
    const auto u = unit(n.heading);
    const int w = s.colors.width();
    const int h = s.colors.height();
    n.x = ((s.x + u[0]) % w + w) % w;
    n.y = ((s.y + u[1]) % h + h) % h;
    return n;
}

AntGrid encode_ant(const AntState& s) {
    AntGrid g(s.colors.width(), s.colors.height());
    for (int y = 0; y < g.height(); ++y) {
        for (int x = 0; x < g.width(); ++x) {
            g.at(x, y).color = s.colors.at(x, y);
        }
    }
    const auto u = unit(s.heading);
    g.at(s.x, s.y).mark = Mark::Head;
    g.at(s.x - u[0], s.y - u[1]).mark = Mark::Tail;
    return g;
}

std::array<std::array<int, 2>, 2> validate_ant(const AntGrid& g) {
    if (g.width() < 3 || g.height() < 3) {
        throw InvalidInput("ant torus must be at least 3x3");
    }
    int heads = 0;
    int tails = 0;
    int hx = 0, hy = 0, tx = 0, ty = 0;
    for (int y = 0; y < g.height(); ++y) {
        for (int x = 0; x < g.width(); ++x) {
            if (g.at(x, y).mark == Mark::Head) {
                ++heads;
                hx = x;
                hy = y;
            } else if (g.at(x, y).mark == Mark::Tail) {
                ++tails;
                tx = x;
                ty = y;
            }
        }
    }
    if (heads != 1 || tails != 1) {
        throw InvalidInput("ant grid needs exactly one head and one tail");
    }
    if (!heading_of(wrap_delta(hx - tx, g.width()), wrap_delta(hy - ty, g.height()))) {
        throw InvalidInput("ant head and tail are not 4-adjacent");
    }
    return {{{hx, hy}, {tx, ty}}};
}

AntCell ant_local_rule(const AntWindow& w, TurnConvention conv) {
    const AntCell& c = w[4];
    if (c.mark == Mark::Tail) {
        return {Mark::Empty, c.color};
    }
    if (c.mark == Mark::Head) {
        return {Mark::Tail, flip(c.color)};
    }
    auto cell = [&](int dx, int dy) -> const AntCell& { return w[static_cast<std::size_t>((dy + 1) * 3 + dx + 1)]; };
    // Empty cell q: look for a head at q+e whose tail sits on a diagonal
    // neighbor q+e+f (f ⊥ e) and whose turn points back at q.
    for (Heading e : {Heading::North, Heading::East, Heading::South, Heading::West}) {
        const auto ue = unit(e);
        const AntCell& p = cell(ue[0], ue[1]);
        if (p.mark != Mark::Head) {
            continue;
        }
        for (Heading f : {turn_left(e), turn_right(e)}) {
            const auto uf = unit(f);
            if (cell(ue[0] + uf[0], ue[1] + uf[1]).mark != Mark::Tail) {
                continue;
            }
            // Tail at p+f: the ant arrived heading -f.
            const Heading leaving = turn(turn_right(turn_right(f)), p.color, conv);
            if (unit(leaving) == std::array<int, 2>{-ue[0], -ue[1]}) {
                return {Mark::Head, c.color};
            }
        }
    }
    return c;
}

AntWindow ant_window(const AntGrid& g, std::int64_t x, std::int64_t y) {
    AntWindow w;
    for (int dy = -1; dy <= 1; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
            w[static_cast<std::size_t>((dy + 1) * 3 + dx + 1)] = g.at(x + dx, y + dy);
        }
    }
    return w;
}

AntGrid ant_step(const AntGrid& g, TurnConvention conv) {
    const auto marks = validate_ant(g);
    // The local rule is the identity on every cell whose window holds no
    // head or tail, so only the 3×3 surroundings of the two marks can change.
    AntGrid next = g;
    for (const auto& [mx, my] : marks) {
        for (int dy = -1; dy <= 1; ++dy) {
            for (int dx = -1; dx <= 1; ++dx) {
                next.at(mx + dx, my + dy) = ant_local_rule(ant_window(g, mx + dx, my + dy), conv);
            }
        }
    }
    return next;
}

AntGrid head_tail_swap(const AntGrid& g) {
    validate_ant(g);
    AntGrid out = g;
    for (int y = 0; y < g.height(); ++y) {
        for (int x = 0; x < g.width(); ++x) {
            auto& m = out.at(x, y).mark;
            if (m == Mark::Head) {
                m = Mark::Tail;
            } else if (m == Mark::Tail) {
                m = Mark::Head;
            }
        }
    }
    return out;
}

std::vector<AntTraceStep> ant_trajectory(int width, int height, std::size_t steps, TurnConvention conv) {
    AntState s = ant_initial(width, height);
    std::vector<AntTraceStep> trace;
    trace.reserve(steps);
    std::int64_t ux = s.x, uy = s.y;
    std::int64_t minx = ux, maxx = ux, miny = uy, maxy = uy;
    for (std::size_t t = 0; t < steps; ++t) {
        trace.push_back({t, ux, uy, s.heading, s.colors.at(s.x, s.y)});
        s = ant_oracle_step(s, conv);
        const auto u = unit(s.heading);
        ux += u[0];
        uy += u[1];
        minx = std::min(minx, ux);
        maxx = std::max(maxx, ux);
        miny = std::min(miny, uy);
        maxy = std::max(maxy, uy);
        if (maxx - minx + 1 >= width || maxy - miny + 1 >= height) {
            throw InvalidInput("ant_trajectory: torus " + std::to_string(width) + "x" + std::to_string(height) +
                               " too small for " + std::to_string(steps) + " steps");
        }
    }
    return trace;
}

std::optional<Highway> detect_highway(const std::vector<AntTraceStep>& trajectory, std::size_t min_repeats) {
    const std::size_t n = trajectory.size();
    if (min_repeats == 0) {
        min_repeats = 1;
    }
    for (std::size_t p = 1; p * min_repeats < n; ++p) {
        const std::int64_t dx = trajectory[n - 1].x - trajectory[n - 1 - p].x;
        const std::int64_t dy = trajectory[n - 1].y - trajectory[n - 1 - p].y;
        if (dx == 0 && dy == 0) {
            continue;
        }
        // Walk back from the end while step s repeats at s + p.
        std::size_t onset = n - p;
        while (onset > 0) {
            const auto& a = trajectory[onset - 1];
            const auto& b = trajectory[onset - 1 + p];
            if (a.heading != b.heading || a.read != b.read || b.x - a.x != dx || b.y - a.y != dy) {
                break;
            }
            --onset;
        }
        if (n - onset >= p * (min_repeats + 1)) {
            return Highway{trajectory[onset].step, p, dx, dy};
        }
    }
    return std::nullopt;
}

} // namespace tsca
