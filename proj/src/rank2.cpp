#include "hdx/rank2.hpp"

#include <algorithm>
#include <numeric>

#include "hdx/errors.hpp"

namespace hdx {

std::string to_string(SpanType t) {
    switch (t) {
        case SpanType::A1: return "A1";
        case SpanType::A1xA1: return "A1xA1";
        case SpanType::A2: return "A2";
        case SpanType::B2: return "B2";
        case SpanType::G2: return "G2";
    }
    return "?";
}

Rank2Span::Rank2Span(const RootSystem& phi, std::vector<Root> psi) : psi_(std::move(psi)) {
    if (psi_.empty() || psi_.size() > 2) throw DomainError("rank-2 span needs one or two roots");
    for (const auto& r : psi_)
        if (!phi.contains(r)) throw DomainError("not a root: " + r.to_string());
    if (vector_rank(psi_) != static_cast<int>(psi_.size())) throw DomainError("span roots are linearly dependent");

    if (psi_.size() == 1) {
        type_ = SpanType::A1;
        span_roots_ = {psi_[0], -psi_[0]};
        positive_ = {psi_[0]};
        local_ = {{1, 0}};
        psi_plus_ = {0};
        psi_height_ = {1};
        psi_coords_ = {{1, 0}};
        return;
    }

    const Root& x = psi_[0];
    const Root& y = psi_[1];
    const long xx = x.norm2(), xy = x.dot(y), yy = y.norm2();
    const long det = xx * yy - xy * xy;
    // coordinates over Psi, scaled by det
    auto scaled = [&](const Root& g) {
        long gx = g.dot(x), gy = g.dot(y);
        return std::pair<long, long>{gx * yy - gy * xy, gy * xx - gx * xy};
    };
    auto positive = [&](const Root& g) {
        auto [n1, n2] = scaled(g);
        return n1 + n2 > 0 || (n1 + n2 == 0 && n1 > 0);
    };

    for (const auto& g : phi.roots())
        if (vector_rank({x, y, g}) == 2) span_roots_.push_back(g);
    switch (span_roots_.size()) {
        case 4: type_ = SpanType::A1xA1; break;
        case 6: type_ = SpanType::A2; break;
        case 8: type_ = SpanType::B2; break;
        case 12: type_ = SpanType::G2; break;
        default: throw IntegrityError("unexpected rank-2 subsystem of size " + std::to_string(span_roots_.size()));
    }

    std::vector<Root> pos;
    for (const auto& g : span_roots_)
        if (positive(g)) pos.push_back(g);
    std::vector<Root> simples;
    for (const auto& g : pos) {
        bool decomposable = false;
        for (const auto& h : pos)
            if (!(h == g) && std::find(pos.begin(), pos.end(), g - h) != pos.end()) decomposable = true;
        if (!decomposable) simples.push_back(g);
    }
    if (simples.size() != 2) throw IntegrityError("local positive system without two simple roots");
    if (simples[0].norm2() > simples[1].norm2() ||
        (simples[0].norm2() == simples[1].norm2() && scaled(simples[0]).first < scaled(simples[1]).first))
        std::swap(simples[0], simples[1]);

    std::vector<std::pair<std::pair<int, int>, Root>> keyed;
    for (const auto& g : pos) {
        auto c = integer_coordinates(g, simples);
        if (!c) throw IntegrityError("root outside the lattice of its local simple roots");
        keyed.push_back({{(*c)[0], (*c)[1]}, g});
    }
    std::sort(keyed.begin(), keyed.end(), [](const auto& p, const auto& q) {
        int hp = p.first.first + p.first.second, hq = q.first.first + q.first.second;
        if (hp != hq) return hp < hq;
        return p.first.second < q.first.second;
    });
    for (auto& [c, g] : keyed) {
        local_.push_back(c);
        positive_.push_back(g);
        auto [n1, n2] = scaled(g);
        if (n1 >= 0 && n2 >= 0 && n1 % det == 0 && n2 % det == 0) {
            psi_height_.push_back(static_cast<int>((n1 + n2) / det));
            psi_coords_.push_back({static_cast<int>(n1 / det), static_cast<int>(n2 / det)});
            psi_plus_.push_back(static_cast<int>(positive_.size()) - 1);
        } else {
            psi_height_.push_back(0);
            psi_coords_.push_back({0, 0});
        }
    }
}

int Rank2Span::index_of(const Root& r) const {
    auto it = std::find(positive_.begin(), positive_.end(), r);
    return it == positive_.end() ? -1 : static_cast<int>(it - positive_.begin());
}

std::string Rank2Span::label() const {
    std::string s = to_string(type_) + "[";
    for (std::size_t i = 0; i < psi_.size(); ++i) s += (i ? "," : "") + psi_[i].to_string();
    return s + "]";
}

}  // namespace hdx
