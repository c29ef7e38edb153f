#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "tsca/errors.hpp"

namespace tsca {

// Finite 2D configuration on a torus; coordinates wrap, row-major storage, y grows downward.
template <class Cell>
class TorusGrid {
public:
    TorusGrid() = default;
    TorusGrid(int width, int height, Cell fill = Cell{}) : width_(width), height_(height) {
        if (width <= 0 || height <= 0) {
            throw InvalidInput("torus dimensions must be positive");
        }
        cells_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill);
    }

    int width() const { return width_; }
    int height() const { return height_; }

    const Cell& at(std::int64_t x, std::int64_t y) const { return cells_[index(x, y)]; }
    Cell& at(std::int64_t x, std::int64_t y) { return cells_[index(x, y)]; }

    const std::vector<Cell>& cells() const { return cells_; }

    friend bool operator==(const TorusGrid&, const TorusGrid&) = default;

private:
    std::size_t index(std::int64_t x, std::int64_t y) const {
        const std::int64_t xx = ((x % width_) + width_) % width_;
        const std::int64_t yy = ((y % height_) + height_) % height_;
        return static_cast<std::size_t>(yy * width_ + xx);
    }

    int width_ = 0;
    int height_ = 0;
    std::vector<Cell> cells_;
};

enum class Color : std::uint8_t { White = 0, Black = 1 };

inline Color flip(Color c) {
    return c == Color::White ? Color::Black : Color::White;
}

// ------------------------------------------------------------------ billiard

// Direction from a cell to the shared corner of its current 2×2 block.
enum class Arrow : std::uint8_t { NE, SE, SW, NW };

Arrow opposite(Arrow a);

struct BilliardCell {
    Color color = Color::White;
    Arrow arrow = Arrow::SE;
    friend bool operator==(const BilliardCell&, const BilliardCell&) = default;
};

using BilliardGrid = TorusGrid<BilliardCell>;

// Block colors as a 4-bit code: bit 0 top-left, bit 1 top-right, bit 2
// bottom-left, bit 3 bottom-right.
using BlockCode = std::uint8_t;

// The block permutation: a lone ball crosses to the opposite corner, a
// diagonal pair turns into the other diagonal, everything else stays put.
BlockCode billiard_block_rule(BlockCode block);

// Primary blocks are anchored at even coordinates; the alternate partition is
// offset by (1, 1).
enum class Partition { Primary, Alternate };

// All-white cells with the arrow layer for the given partition.
BilliardGrid make_billiard(int width, int height, Partition partition = Partition::Primary);

// Which partition the arrow layer encodes, or nullopt if it is not one of the two valid layers.
std::optional<Partition> arrow_partition(const BilliardGrid& g);

// Applies the block rule on the partition named by the arrows, then reverses every arrow.
BilliardGrid billiard_step(const BilliardGrid& g);

// The time-reversing involution: reverses every arrow, colors untouched.
BilliardGrid arrow_flip(const BilliardGrid& g);

std::size_t count_black(const BilliardGrid& g);

// ---------------------------------------------------------------------- ant

enum class Mark : std::uint8_t { Empty, Head, Tail };

struct AntCell {
    Mark mark = Mark::Empty;
    Color color = Color::White;
    friend bool operator==(const AntCell&, const AntCell&) = default;
};

using AntGrid = TorusGrid<AntCell>;

enum class Heading : std::uint8_t { North, East, South, West };

std::array<int, 2> unit(Heading h);
Heading turn_right(Heading h);
Heading turn_left(Heading h);

// Which color makes the ant turn right.
enum class TurnConvention { WhiteRight, BlackRight };

struct AntState {
    TorusGrid<Color> colors;
    int x = 0;
    int y = 0;
    // Direction of the last move.
    Heading heading = Heading::North;
    friend bool operator==(const AntState&, const AntState&) = default;
};

// All-white torus, ant at the center heading north.
AntState ant_initial(int width, int height);

// Turn by the color under the ant, flip that color, move forward one cell.
AntState ant_oracle_step(const AntState& s, TurnConvention conv = TurnConvention::WhiteRight);

// Head on the ant's cell, tail on the cell it came from.
AntGrid encode_ant(const AntState& s);

// Throws InvalidInput unless there is exactly one head and one tail, 4-adjacent,
// on a torus of at least 3×3. Returns {head, tail} positions.
std::array<std::array<int, 2>, 2> validate_ant(const AntGrid& g);

// Moore window in row-major order; index 4 is the cell itself.
using AntWindow = std::array<AntCell, 9>;

AntWindow ant_window(const AntGrid& g, std::int64_t x, std::int64_t y);

// The CA's local rule.
AntCell ant_local_rule(const AntWindow& w, TurnConvention conv = TurnConvention::WhiteRight);

// One synchronous step of the Moore-neighborhood CA: tail → empty, head → tail
// with flipped color, and the empty cell the ant turns toward becomes head.
AntGrid ant_step(const AntGrid& g, TurnConvention conv = TurnConvention::WhiteRight);

// The time-reversing involution: exchanges head and tail.
AntGrid head_tail_swap(const AntGrid& g);

struct AntTraceStep {
    std::size_t step = 0;
    // Unwrapped position before the move.
    std::int64_t x = 0;
    std::int64_t y = 0;
    // Heading on arrival at (x, y).
    Heading heading = Heading::North;
    // Color found at (x, y); the cell is left with the opposite color.
    Color read = Color::White;
};

// Runs the agent from all-white for `steps` steps. Throws InvalidInput if the
// visited region stops fitting strictly inside the torus.
std::vector<AntTraceStep> ant_trajectory(int width, int height, std::size_t steps,
                                         TurnConvention conv = TurnConvention::WhiteRight);

struct Highway {
    std::size_t onset = 0;
    std::size_t period = 0;
    std::int64_t dx = 0;
    std::int64_t dy = 0;
};

// Smallest period p (then earliest onset t) such that from t to the end of the
// trajectory every step repeats p steps later, displaced by a fixed nonzero
// vector, with at least `min_repeats` periods observed.
std::optional<Highway> detect_highway(const std::vector<AntTraceStep>& trajectory, std::size_t min_repeats = 3);

} // namespace tsca
