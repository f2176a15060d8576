#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hdx/complex.hpp"
#include "hdx/g2lab.hpp"
#include "hdx/matgroups.hpp"
#include "hdx/spectra.hpp"

using namespace hdx;

namespace {

double median_seconds(int reps, const std::function<void()>& fn) {
    std::vector<double> t;
    for (int r = 0; r < reps; ++r) {
        const auto t0 = std::chrono::steady_clock::now();
        fn();
        t.push_back(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    }
    std::sort(t.begin(), t.end());
    return t[t.size() / 2];
}

struct Row {
    std::string kernel;
    std::string workload;
    double serial = 0;
    double parallel = 0;
    bool agree = false;
};

void print(const Row& r) {
    std::printf("%-22s %-34s %10.4f %10.4f %8.2fx %s\n", r.kernel.c_str(), r.workload.c_str(), r.serial, r.parallel,
                r.serial / r.parallel, r.agree ? "agree" : "DIFFER");
    std::fflush(stdout);
}

bool close(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (std::abs(a[i] - b[i]) > 1e-12) return false;
    return true;
}

std::vector<double> probe(std::size_t n) {
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = std::sin(double(i) * 0.37);
    return x;
}

Row operator_row(const std::string& kernel, const std::string& workload, int reps, const LinearOperator& par,
                 const LinearOperator& ser) {
    const auto x = probe(par.n);
    std::vector<double> a, b;
    Row r{kernel, workload};
    r.serial = median_seconds(reps, [&] { ser.apply(x, b); });
    r.parallel = median_seconds(reps, [&] { par.apply(x, a); });
    r.agree = close(a, b);
    return r;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"serial reference against OpenMP kernel"};
    int reps = 3;
    int threads = 0;
    app.add_option("--reps", reps, "repetitions per measurement (median reported)")->check(CLI::PositiveNumber);
    app.add_option("--threads", threads, "OpenMP threads (0 = runtime default)");
    CLI11_PARSE(app, argc, argv);
    if (threads > 0) omp_set_num_threads(threads);

    std::printf("threads %d, median of %d\n", omp_get_max_threads(), reps);
    std::printf("%-22s %-34s %10s %10s %9s\n", "kernel", "workload", "serial_s", "omp_s", "speedup");

    auto sl3 = Realization::sl(3);
    const auto g = GroupTable::enumerate(sl3, 5);
    {
        Row r{"center_scan", "SL3(5), 372000 elements"};
        std::vector<std::uint64_t> a, b;
        r.serial = median_seconds(reps, [&] { b = center_scan_serial(g); });
        r.parallel = median_seconds(reps, [&] { a = center_scan(g); });
        r.agree = a == b;
        print(r);
    }
    {
        const auto k = build_complex(g, special_set(sl3.phi()), "special");
        Row r{"connectivity_check", "K(SL3(5)), 8928 links"};
        ConnectivityReport a, b;
        r.serial = median_seconds(reps, [&] { b = connectivity_check_serial(k); });
        r.parallel = median_seconds(reps, [&] { a = connectivity_check(k); });
        r.agree = a.ok() == b.ok() && a.links_checked == b.links_checked;
        print(r);
    }
    {
        Row r{"charsum_case3", "p=5, 5^9 characters"};
        SpectralReport a, b;
        r.serial = median_seconds(reps, [&] { b = charsum_case3_serial(5, 1); });
        r.parallel = median_seconds(reps, [&] { a = charsum_case3(5, 1); });
        r.agree = a.exact == b.exact;
        print(r);
    }
    auto sp = Realization::sp4();
    {
        Field f(5, 4);
        SpanGroup sg(sp.phi(), {sp.phi().simples()[0], sp.phi().simples()[1]}, f, &sp);
        const auto side = cayley_side(sg);
        print(operator_row("cayley_operator", "B2 side p=5 m=4, 5^9 vertices", reps, cayley_operator(side),
                           cayley_operator_serial(side)));
    }
    {
        Field f(7, 3);
        SpanGroup sg(sl3.phi(), {sl3.phi().simples()[0], sl3.phi().simples()[1]}, f, &sl3);
        const auto sq = square_one_side(SparseWalkGraph::from_link(direct_link(sg)), Side::Left);
        const auto x = probe(sq.size());
        std::vector<double> a, b;
        Row r{"SparseWalkGraph::apply", "A2 squared side p=7 m=3"};
        r.serial = median_seconds(reps, [&] { sq.apply_serial(x, b); });
        r.parallel = median_seconds(reps, [&] { sq.apply(x, a); });
        r.agree = close(a, b);
        print(r);
    }
    {
        Field f(5, 1);
        G2Link l(G2Case::I, f);
        print(operator_row("g2_operator", "G2 Case I p=5 m=1", reps, g2_operator(l), g2_operator_serial(l)));
    }
    {
        Field f(5, 3);
        const auto s = special_set(sp.phi());
        Row r{"subgroup_intersection", "Sp4 p=5 m=3, largest pair"};
        bool a = false, b = false;
        r.serial = median_seconds(reps, [&] { b = subgroup_intersection_check_serial(sp, f, s.without(std::size_t{1}), s.without(std::size_t{2})); });
        r.parallel = median_seconds(reps, [&] { a = subgroup_intersection_check(sp, f, s.without(std::size_t{1}), s.without(std::size_t{2})); });
        r.agree = a == b && a;
        print(r);
    }
    return 0;
}
