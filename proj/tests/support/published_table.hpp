#pragma once
// Published confusion counts and scores of the eight ResNet rows on the two
// test sets (S1, C1). Scores are as printed: three decimals, ACC in percent.

#include <array>

namespace fringe::published {

struct Entry {
  int fp, tp, fn, tn;
  int acc_percent;
  double f1, precision, recall;
};

struct Row {
  const char* model;
  Entry s1;
  Entry c1;
};

inline constexpr std::array<Row, 8> kResNetRows{{
    {"ResNet18-ImageNet", {12, 32, 0, 20, 81, 0.841, 0.727, 1.0}, {0, 132, 272, 365, 64, 0.491, 1.0, 0.326}},
    {"ResNet18-SimCLR", {9, 31, 1, 23, 84, 0.860, 0.775, 0.968}, {0, 178, 226, 365, 70, 0.611, 1.0, 0.440}},
    {"ResNet34-ImageNet", {10, 31, 1, 22, 82, 0.848, 0.756, 0.968}, {3, 181, 223, 362, 70, 0.615, 0.983, 0.448}},
    {"ResNet34-SimCLR", {11, 32, 0, 21, 82, 0.853, 0.744, 1.0}, {4, 339, 65, 361, 91, 0.907, 0.988, 0.839}},
    {"ResNet50-ImageNet", {10, 31, 1, 22, 82, 0.848, 0.756, 0.968}, {1, 125, 279, 364, 63, 0.471, 0.992, 0.309}},
    {"ResNet50-SimCLR", {8, 31, 1, 24, 85, 0.872, 0.794, 0.968}, {10, 347, 57, 355, 91, 0.911, 0.971, 0.858}},
    {"ResNet50-SimCLR-Scratch", {8, 31, 1, 24, 85, 0.872, 0.794, 0.968}, {2, 306, 98, 363, 86, 0.859, 0.993, 0.757}},
    {"ResNet50-Moco", {13, 32, 0, 19, 79, 0.831, 0.711, 1.0}, {0, 267, 137, 365, 82, 0.795, 1.0, 0.660}},
}};

}  // namespace fringe::published
