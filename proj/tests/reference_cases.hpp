#pragma once

// Reference values produced by tests/oracles/reference_values.py
// (scipy.stats.entropy, mpmath at 40 digits, scipy.stats.chi2 and
// scipy.stats.anderson_ksamp). Shared by the unit and acceptance tests.

#include <cstdint>
#include <vector>

namespace vfa::reference {

struct KlCase {
  std::vector<std::int64_t> observed, control;
  double smoothing_alpha, kl;
};

inline const std::vector<KlCase> kKlCases = {
    {{1, 1}, {1, 3}, 0.0, 0.14384103622589045},
    {{4, 0}, {1, 1}, 0.0, 0.6931471805599453},
    {{0, 4}, {5, 5}, 0.5, 0.3680642071684971},
    {{10, 20, 30}, {20, 20, 20}, 0.5, 0.08280786534154984},
    {{1, 1, 1, 1}, {1, 1, 1, 1}, 0.5, 0.0},
    {{100, 0, 0}, {1, 1, 1}, 0.5, 1.0364619082463924},
    {{7, 3, 0, 2}, {3, 3, 3, 3}, 0.5, 0.2787081945907883},
    {{50, 50}, {90, 10}, 0.0, 0.5108256237659906},
    {{1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13}, std::vector<std::int64_t>(13, 1), 0.5, 0.13657112170499724},
    {std::vector<std::int64_t>(13, 13), {4, 4, 4, 4, 4, 4, 4, 4, 16, 4, 4, 4, 4}, 0.0, 0.10100133699979164},
    {{0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1000}, std::vector<std::int64_t>(13, 1), 0.5, 2.5136563925778557},
    {{90, 90, 90, 90, 90, 90, 90, 90, 90, 0, 0, 0, 90}, std::vector<std::int64_t>(13, 1), 0.5, 0.2521061420685961},
    {{5, 0, 5}, {1, 8, 1}, 0.5, 1.119609230730849},
    {{3, 9, 27, 81}, {81, 27, 9, 3}, 0.0, 2.3070858062030304},
    {{2, 2, 2, 2, 2}, {1, 2, 3, 2, 1}, 0.0, 0.09080533494451903},
    {{1000, 1}, {1, 1000}, 0.5, 6.483320614640427},
    {{12, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0}, std::vector<std::int64_t>(23, 1), 0.5,
     0.9975146061702606},
    {{6, 4}, {5, 5}, 1.0, 0.013953914568419643},
    {{0, 0, 1}, {1, 1, 1}, 2.0, 0.01962008079052642},
    {{17, 23, 31, 29}, {25, 25, 25, 25}, 0.5, 0.023989643675704844},
};

struct GammaCase {
  double s, x, q;
};

inline const std::vector<GammaCase> kGammaCases = {
    {0.5, 1.66667, 0.067888879721433877},
    {1.0, 1.0, 0.36787944117144232},
    {0.5, 0.1, 0.65472084601857702},
    {1.5, 2.0, 0.26146412994911062},
    {2.0, 0.5, 0.90979598956895014},
    {3.0, 7.5, 0.020256715056664405},
    {5.5, 4.0, 0.71330382963003216},
    {10.0, 12.0, 0.24239216167051235},
    {0.25, 3.0, 0.0050108959487083081},
    {6.0, 30.0, 2.2573487463962842e-8},
    {50.0, 45.0, 0.75319796559982973},
    {100.0, 130.0, 0.0027504083673065263},
    {0.5, 20.0, 2.539628589470865e-10},
    {12.5, 0.01, 1.0},
    {1.0, 1e-06, 0.9999990000005},
};

struct ChiCase {
  std::vector<std::int64_t> observed, expected;
  double statistic;
  int df;
  double p;
};

inline const std::vector<ChiCase> kChiCases = {
    {{10, 20}, {15, 15}, 3.3333333333333335, 1, 0.06788915486182893},
    {{15, 15}, {15, 15}, 0.0, 1, 1.0},
    {{30, 10, 20}, {20, 20, 20}, 10.0, 2, 0.006737946999085468},
    {{8, 12, 9, 11, 10, 10}, {1, 1, 1, 1, 1, 1}, 1.0, 5, 0.9625657732472964},
    {{50, 30, 20}, {5, 3, 2}, 0.0, 2, 1.0},
    {{25, 30, 45}, {1, 1, 1}, 6.5, 2, 0.03877420783172202},
    {{100, 0, 50, 50}, {10, 10, 10, 10}, 100.0, 3, 1.5541594313896026e-21},
    {{7, 13, 40, 40}, {2, 3, 5, 5}, 8.124999999999998, 3, 0.04349775141156384},
    {{12, 18, 30, 25, 15}, {20, 20, 20, 20, 20}, 10.9, 4, 0.027711165255352603},
    {{1, 2, 3, 4, 5, 6, 7, 8, 9, 10}, {10, 9, 8, 7, 6, 5, 4, 3, 2, 1}, 93.39960317460317, 6,
     5.9528898702591496e-18},
    {{60, 40}, {1, 1}, 4.0, 1, 0.04550026389635857},
    {{48, 52}, {1, 1}, 0.16, 1, 0.6891565167793516},
    {{5, 5, 5, 85}, {1, 1, 1, 1}, 192.0, 3, 2.2571735467056468e-41},
    {{20, 30, 50}, {2, 3, 5}, 0.0, 2, 1.0},
    {{33, 33, 34}, {1, 2, 1}, 11.58, 2, 0.0030579821764233073},
    {{9, 11, 10, 12, 8, 10, 10, 11, 9, 10}, {1, 1, 1, 1, 1, 1, 1, 1, 1, 1}, 1.2000000000000002, 9, 0.9988211034284458},
    {{3, 4, 20, 30, 25, 10, 5, 3}, {1, 2, 6, 10, 10, 6, 2, 1}, 3.9300000000000006, 5, 0.5595377030906736},
    {{0, 0, 40, 60}, {1, 1, 10, 10}, 14.400000000000002, 2, 0.0007465858083766782},
    {{100, 120, 80, 90, 110, 95, 105, 100, 85, 115, 100, 90, 310}, {4, 4, 4, 4, 4, 4, 4, 4, 4, 4, 4, 4, 16}, 32.0, 12,
     0.0013837850247628773},
    {{2, 8, 15, 25, 25, 15, 8, 2}, {1, 1, 1, 1, 1, 1, 1, 1}, 46.88, 7, 5.8910595138352393e-08},
};

struct AdCase {
  std::vector<std::vector<double>> samples;
  double statistic, p;
};

inline const std::vector<AdCase> kAdCases = {
    {{{1, 2, 3}, {1, 2, 3}}, -1.7739371879672585, 0.25},
    {{{1, 1, 1, 1}, {9, 9, 9, 9}}, 9.839667000958896, 0.001},
    {{{1, 2, 3, 4, 5}, {3, 4, 5, 6, 7}}, 1.3406175851231712, 0.09101691449243049},
    {{{1, 2, 2, 3, 3, 3}, {2, 3, 3, 4, 4, 5}}, 2.268968171287354, 0.03794124378182581},
    {{{0, 0, 1, 1, 2}, {0, 1, 1, 2, 2}, {1, 2, 2, 3, 3}}, 2.2675448198884536, 0.0349994514989832},
    {{{5, 1, 4, 2, 3}, {10, 9, 8, 7, 6}}, 4.726015467264128, 0.0043559779665065},
    {{{1, 3, 5, 7, 9, 11}, {2, 4, 6, 8, 10, 12}}, -1.1101552661170608, 0.25},
    {{{1, 1, 2, 2, 3, 3, 4, 4}, {1, 2, 3, 4}}, -1.5234241599820038, 0.25},
    {{{17, 18, 18, 19, 20, 20, 21}, {17, 17, 18, 19, 19, 22, 25}}, -0.8716086701197383, 0.25},
    {{{0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12}, {0, 0, 1, 1, 2, 2, 3, 12}}, 2.2407032616059523,
     0.03894757656278322},
    {{{1, 2}, {3, 4}, {5, 6}}, 2.3022404137859267, 0.03370940195716319},
    {{{2.5, 3.1, 4.7, 1.2}, {0.3, 2.2, 5.9}, {3.3, 3.4, 8.8, 1.1, 0.7}}, -1.039356920699642, 0.25},
    {{{1, 1, 1, 2}, {1, 2, 2, 2}}, 1.229958375119862, 0.10123437023871325},
    {{{4, 4, 4, 4, 5}, {4, 5, 5, 5, 5}}, 3.5117603827071315, 0.012351310670714656},
    {{{10, 20, 30, 40, 50, 60, 70, 80}, {15, 25, 35, 45, 55, 65, 75, 85}}, -1.1545854862485796, 0.25},
    {{{1, 2, 3, 4, 5, 6, 7, 8, 9, 10}, {6, 7, 8, 9, 10, 11, 12, 13, 14, 15}}, 5.093343298056228,
     0.003211822745927066},
    {{{0, 0, 0, 1}, {0, 1, 1, 1}, {0, 0, 1, 1}, {1, 1, 1, 1}}, 1.8308230244930488, 0.05465633022868904},
    {{{3, 1, 4, 1, 5, 9, 2, 6}, {5, 3, 5, 8, 9, 7, 9, 3}}, 1.0349823967442748, 0.12223945216336803},
    {{{12, 12, 12, 11, 10}, {0, 1, 2, 3, 4, 5, 6}}, 6.499692386504788, 0.0010466757588147293},
    {{{20, 21, 22, 23, 24, 25, 26}, {20, 20, 21, 21, 22, 22}}, 1.5689058421029272, 0.07318324012579484},
    {{{1, 2, 3, 4, 5, 6}, {1, 2, 3, 4, 5, 60}}, -1.3680773775667536, 0.25},
};

}  // namespace vfa::reference
