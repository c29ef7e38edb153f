#include "tsca/image.hpp"

#include <sstream>

namespace tsca {

namespace {

std::string header(const char* magic, int width, int height) {
    if (width <= 0 || height <= 0) {
        throw InvalidInput("image dimensions must be positive");
    }
    return std::string(magic) + "\n" + std::to_string(width) + " " + std::to_string(height) + "\n";
}

void check_size(int width, int height, std::size_t n) {
    if (static_cast<std::size_t>(width) * static_cast<std::size_t>(height) != n) {
        throw InvalidInput("pixel count does not match image dimensions");
    }
}

} // namespace

std::string encode_pbm(int width, int height, const std::vector<std::uint8_t>& pixels) {
    std::string out = header("P4", width, height);
    check_size(width, height, pixels.size());
    const std::size_t row_bytes = (static_cast<std::size_t>(width) + 7) / 8;
    for (int y = 0; y < height; ++y) {
        std::string row(row_bytes, '\0');
        for (int x = 0; x < width; ++x) {
            if (pixels[static_cast<std::size_t>(y) * static_cast<std::size_t>(width) + static_cast<std::size_t>(x)]) {
                row[static_cast<std::size_t>(x) / 8] |= static_cast<char>(0x80 >> (x % 8));
            }
        }
        out += row;
    }
    return out;
}

std::string encode_pgm(int width, int height, std::uint32_t maxval, const std::vector<std::uint32_t>& pixels) {
    if (maxval == 0 || maxval > 65535) {
        throw InvalidInput("PGM maxval must be in 1..65535");
    }
    std::string out = header("P5", width, height) + std::to_string(maxval) + "\n";
    check_size(width, height, pixels.size());
    for (std::uint32_t v : pixels) {
        if (v > maxval) {
            throw InvalidInput("PGM sample exceeds maxval");
        }
        if (maxval > 255) {
            out += static_cast<char>(v >> 8);
        }
        out += static_cast<char>(v & 0xff);
    }
    return out;
}

std::string encode_ppm(int width, int height, const std::vector<Rgb>& pixels) {
    std::string out = header("P6", width, height) + "255\n";
    check_size(width, height, pixels.size());
    for (const Rgb& p : pixels) {
        out.append(reinterpret_cast<const char*>(p.data()), 3);
    }
    return out;
}

std::string spacetime_image(const std::vector<CyclicConfig>& rows, Alphabet m) {
    if (rows.empty()) {
        throw InvalidInput("space-time diagram needs at least one row");
    }
    const std::size_t n = rows.front().size();
    for (const auto& r : rows) {
        if (r.size() != n) {
            throw InvalidInput("space-time rows differ in length");
        }
    }
    const int w = static_cast<int>(n);
    const int h = static_cast<int>(rows.size());
    if (m.size == 2) {
        std::vector<std::uint8_t> px;
        px.reserve(n * rows.size());
        for (const auto& r : rows) {
            for (State s : r.cells()) {
                px.push_back(static_cast<std::uint8_t>(s != 0));
            }
        }
        return encode_pbm(w, h, px);
    }
    std::vector<std::uint32_t> px;
    px.reserve(n * rows.size());
    for (const auto& r : rows) {
        for (State s : r.cells()) {
            if (s >= m.size) {
                throw InvalidInput("state outside the alphabet");
            }
            px.push_back(s);
        }
    }
    return encode_pgm(w, h, m.size - 1, px);
}

std::string spacetime_text(const std::vector<CyclicConfig>& rows) {
    static constexpr char digits[] = "0123456789abcdefghijklmnopqrstuvwxyz";
    std::string out;
    for (const auto& r : rows) {
        for (State s : r.cells()) {
            if (s >= 36) {
                throw InvalidInput("text diagrams support at most 36 states");
            }
            out += digits[s];
        }
        out += '\n';
    }
    return out;
}

std::string billiard_ppm(const BilliardGrid& g) {
    std::vector<Rgb> px;
    px.reserve(g.cells().size());
    for (const auto& c : g.cells()) {
        if (c.color == Color::Black) {
            px.push_back({0, 0, 0});
            continue;
        }
        switch (c.arrow) {
        case Arrow::NE: px.push_back({255, 236, 236}); break;
        case Arrow::SE: px.push_back({236, 255, 236}); break;
        case Arrow::SW: px.push_back({236, 236, 255}); break;
        case Arrow::NW: px.push_back({255, 255, 224}); break;
        }
    }
    return encode_ppm(g.width(), g.height(), px);
}

std::string billiard_text(const BilliardGrid& g) {
    std::string out;
    for (int y = 0; y < g.height(); ++y) {
        for (int x = 0; x < g.width(); ++x) {
            out += g.at(x, y).color == Color::Black ? '#' : '.';
        }
        out += '\n';
    }
    return out;
}

std::string ant_ppm(const AntGrid& g) {
    std::vector<Rgb> px;
    px.reserve(g.cells().size());
    for (const auto& c : g.cells()) {
        switch (c.mark) {
        case Mark::Head: px.push_back({220, 20, 20}); break;
        case Mark::Tail: px.push_back({20, 20, 220}); break;
        case Mark::Empty:
            px.push_back(c.color == Color::Black ? Rgb{0, 0, 0} : Rgb{255, 255, 255});
            break;
        }
    }
    return encode_ppm(g.width(), g.height(), px);
}

std::string ant_text(const AntGrid& g) {
    std::string out;
    for (int y = 0; y < g.height(); ++y) {
        for (int x = 0; x < g.width(); ++x) {
            const AntCell& c = g.at(x, y);
            const bool black = c.color == Color::Black;
            switch (c.mark) {
            case Mark::Head: out += black ? 'H' : 'h'; break;
            case Mark::Tail: out += black ? 'T' : 't'; break;
            case Mark::Empty: out += black ? '#' : '.'; break;
            }
        }
        out += '\n';
    }
    return out;
}

std::string heading_name(Heading h) {
    switch (h) {
    case Heading::North: return "N";
    case Heading::East: return "E";
    case Heading::South: return "S";
    case Heading::West: return "W";
    }
    return "?";
}

std::string trajectory_csv(const std::vector<AntTraceStep>& trajectory) {
    std::ostringstream out;
    out << "step,x,y,orientation,color_flipped\n";
    for (const auto& s : trajectory) {
        out << s.step << ',' << s.x << ',' << s.y << ',' << heading_name(s.heading) << ','
            << (s.read == Color::White ? "white_to_black" : "black_to_white") << '\n';
    }
    return out.str();
}

} // namespace tsca
