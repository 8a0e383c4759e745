#include "transform.h"

#include <cmath>

namespace pvpc {

const int32_t kDctKernel[8][8] = {
    {1448, 1448, 1448, 1448, 1448, 1448, 1448, 1448},
    {2009, 1703, 1138, 400, -400, -1138, -1703, -2009},
    {1892, 784, -784, -1892, -1892, -784, 784, 1892},
    {1703, -400, -2009, -1138, 1138, 2009, 400, -1703},
    {1448, -1448, -1448, 1448, 1448, -1448, -1448, 1448},
    {1138, -2009, 400, 1703, -1703, -400, 2009, -1138},
    {784, -1892, 1892, -784, -784, 1892, -1892, 784},
    {400, -1138, 1703, -2009, 2009, -1703, 1138, -400},
};

const uint8_t kZigzagScan[64] = {
    0,  1,  8,  16, 9,  2,  3,  10, 17, 24, 32, 25, 18, 11, 4,  5,
    12, 19, 26, 33, 40, 48, 41, 34, 27, 20, 13, 6,  7,  14, 21, 28,
    35, 42, 49, 56, 57, 50, 43, 36, 29, 22, 15, 23, 30, 37, 44, 51,
    58, 59, 52, 45, 38, 31, 39, 46, 53, 60, 61, 54, 47, 55, 62, 63,
};

void forwardDct(const Block& block, CoefBlock& coefs) {
  int64_t tmp[64];  // K * X
  for (int i = 0; i < 8; ++i) {
    for (int j = 0; j < 8; ++j) {
      int64_t acc = 0;
      for (int k = 0; k < 8; ++k) acc += int64_t(kDctKernel[i][k]) * block[k * 8 + j];
      tmp[i * 8 + j] = acc;
    }
  }
  for (int i = 0; i < 8; ++i) {
    for (int j = 0; j < 8; ++j) {
      int64_t acc = 0;
      for (int k = 0; k < 8; ++k) acc += tmp[i * 8 + k] * kDctKernel[j][k];
      coefs[i * 8 + j] = acc;  // (K X K^T), scale 2^24
    }
  }
}

namespace {
inline int64_t shiftRound(int64_t v, int shift) { return (v + (int64_t(1) << (shift - 1))) >> shift; }
}  // namespace

void inverseDct(const CoefBlock& coefs, Block& block) {
  int64_t tmp[64];  // K^T * Y, then >> 12
  for (int u = 0; u < 8; ++u) {
    for (int j = 0; j < 8; ++j) {
      int64_t acc = 0;
      for (int i = 0; i < 8; ++i) acc += int64_t(kDctKernel[i][u]) * coefs[i * 8 + j];
      tmp[u * 8 + j] = shiftRound(acc, 12);
    }
  }
  for (int u = 0; u < 8; ++u) {
    for (int v = 0; v < 8; ++v) {
      int64_t acc = 0;
      for (int j = 0; j < 8; ++j) acc += tmp[u * 8 + j] * kDctKernel[j][v];
      block[u * 8 + v] = int32_t(shiftRound(acc, 36));
    }
  }
}

void forwardDctReal(const double in[64], double out[64]) {
  static const double pi = 3.14159265358979323846;
  double basis[8][8];
  for (int i = 0; i < 8; ++i) {
    double c = i == 0 ? std::sqrt(1.0 / 8.0) : std::sqrt(2.0 / 8.0);
    for (int j = 0; j < 8; ++j) basis[i][j] = c * std::cos((2 * j + 1) * i * pi / 16.0);
  }
  double tmp[64];
  for (int i = 0; i < 8; ++i) {
    for (int j = 0; j < 8; ++j) {
      double acc = 0;
      for (int k = 0; k < 8; ++k) acc += basis[i][k] * in[k * 8 + j];
      tmp[i * 8 + j] = acc;
    }
  }
  for (int i = 0; i < 8; ++i) {
    for (int j = 0; j < 8; ++j) {
      double acc = 0;
      for (int k = 0; k < 8; ++k) acc += tmp[i * 8 + k] * basis[j][k];
      out[i * 8 + j] = acc;
    }
  }
}

void inverseDctReal(const double in[64], double out[64]) {
  static const double pi = 3.14159265358979323846;
  double basis[8][8];
  for (int i = 0; i < 8; ++i) {
    double c = i == 0 ? std::sqrt(1.0 / 8.0) : std::sqrt(2.0 / 8.0);
    for (int j = 0; j < 8; ++j) basis[i][j] = c * std::cos((2 * j + 1) * i * pi / 16.0);
  }
  double tmp[64];  // B^T * Y
  for (int u = 0; u < 8; ++u) {
    for (int j = 0; j < 8; ++j) {
      double acc = 0;
      for (int i = 0; i < 8; ++i) acc += basis[i][u] * in[i * 8 + j];
      tmp[u * 8 + j] = acc;
    }
  }
  for (int u = 0; u < 8; ++u) {
    for (int v = 0; v < 8; ++v) {
      double acc = 0;
      for (int j = 0; j < 8; ++j) acc += tmp[u * 8 + j] * basis[j][v];
      out[u * 8 + v] = acc;
    }
  }
}

}  // namespace pvpc
