// Joe-Kuo direction numbers (new-joe-kuo-6 set) for Sobol sequences, dims 2..50.
// Row j holds {degree s, primitive-polynomial interior bits a, m_1..m_s}.
#pragma once

#include <cstdint>

namespace beetle::detail {

struct SobolDirection {
  std::uint32_t degree;
  std::uint32_t poly_a;
  std::uint32_t m[8];
};

inline constexpr int kSobolMaxDimension = 50;

inline constexpr SobolDirection kSobolDirections[49] = {
    {1u, 0u, {1, 0, 0, 0, 0, 0, 0, 0}},  // dim 2
    {2u, 1u, {1, 3, 0, 0, 0, 0, 0, 0}},  // dim 3
    {3u, 1u, {1, 3, 1, 0, 0, 0, 0, 0}},  // dim 4
    {3u, 2u, {1, 1, 1, 0, 0, 0, 0, 0}},  // dim 5
    {4u, 1u, {1, 1, 3, 3, 0, 0, 0, 0}},  // dim 6
    {4u, 4u, {1, 3, 5, 13, 0, 0, 0, 0}},  // dim 7
    {5u, 2u, {1, 1, 5, 5, 17, 0, 0, 0}},  // dim 8
    {5u, 4u, {1, 1, 5, 5, 5, 0, 0, 0}},  // dim 9
    {5u, 7u, {1, 1, 7, 11, 19, 0, 0, 0}},  // dim 10
    {5u, 11u, {1, 1, 5, 1, 1, 0, 0, 0}},  // dim 11
    {5u, 13u, {1, 1, 1, 3, 11, 0, 0, 0}},  // dim 12
    {5u, 14u, {1, 3, 5, 5, 31, 0, 0, 0}},  // dim 13
    {6u, 1u, {1, 3, 3, 9, 7, 49, 0, 0}},  // dim 14
    {6u, 13u, {1, 1, 1, 15, 21, 21, 0, 0}},  // dim 15
    {6u, 16u, {1, 3, 1, 13, 27, 49, 0, 0}},  // dim 16
    {6u, 19u, {1, 1, 1, 15, 7, 5, 0, 0}},  // dim 17
    {6u, 22u, {1, 3, 1, 15, 13, 25, 0, 0}},  // dim 18
    {6u, 25u, {1, 1, 5, 5, 19, 61, 0, 0}},  // dim 19
    {7u, 1u, {1, 3, 7, 11, 23, 15, 103, 0}},  // dim 20
    {7u, 4u, {1, 3, 7, 13, 13, 15, 69, 0}},  // dim 21
    {7u, 7u, {1, 1, 3, 13, 7, 35, 63, 0}},  // dim 22
    {7u, 8u, {1, 3, 5, 9, 1, 25, 53, 0}},  // dim 23
    {7u, 14u, {1, 3, 1, 13, 9, 35, 107, 0}},  // dim 24
    {7u, 19u, {1, 3, 1, 5, 27, 61, 31, 0}},  // dim 25
    {7u, 21u, {1, 1, 5, 11, 19, 41, 61, 0}},  // dim 26
    {7u, 28u, {1, 3, 5, 3, 3, 13, 69, 0}},  // dim 27
    {7u, 31u, {1, 1, 7, 13, 1, 19, 1, 0}},  // dim 28
    {7u, 32u, {1, 3, 7, 5, 13, 19, 59, 0}},  // dim 29
    {7u, 37u, {1, 1, 3, 9, 25, 29, 41, 0}},  // dim 30
    {7u, 41u, {1, 3, 5, 13, 23, 1, 55, 0}},  // dim 31
    {7u, 42u, {1, 3, 7, 3, 13, 59, 17, 0}},  // dim 32
    {7u, 50u, {1, 3, 1, 3, 5, 53, 69, 0}},  // dim 33
    {7u, 55u, {1, 1, 5, 5, 23, 33, 13, 0}},  // dim 34
    {7u, 56u, {1, 1, 7, 7, 1, 61, 123, 0}},  // dim 35
    {7u, 59u, {1, 1, 7, 9, 13, 61, 49, 0}},  // dim 36
    {7u, 62u, {1, 3, 3, 5, 3, 55, 33, 0}},  // dim 37
    {8u, 14u, {1, 3, 1, 15, 31, 13, 49, 245}},  // dim 38
    {8u, 21u, {1, 3, 5, 15, 31, 59, 63, 97}},  // dim 39
    {8u, 22u, {1, 3, 1, 11, 11, 11, 77, 249}},  // dim 40
    {8u, 38u, {1, 3, 1, 11, 27, 43, 71, 9}},  // dim 41
    {8u, 47u, {1, 1, 7, 15, 21, 11, 81, 45}},  // dim 42
    {8u, 49u, {1, 3, 7, 3, 25, 31, 65, 79}},  // dim 43
    {8u, 50u, {1, 3, 1, 1, 19, 11, 3, 205}},  // dim 44
    {8u, 52u, {1, 1, 5, 9, 19, 21, 29, 157}},  // dim 45
    {8u, 56u, {1, 3, 7, 11, 1, 33, 89, 185}},  // dim 46
    {8u, 67u, {1, 3, 3, 3, 15, 9, 79, 71}},  // dim 47
    {8u, 70u, {1, 3, 7, 11, 15, 39, 119, 27}},  // dim 48
    {8u, 84u, {1, 1, 3, 1, 11, 31, 97, 225}},  // dim 49
    {8u, 97u, {1, 1, 1, 3, 23, 43, 57, 177}},  // dim 50
};

}  // namespace beetle::detail
