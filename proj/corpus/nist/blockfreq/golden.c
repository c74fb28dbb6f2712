#define BLOCK_SIZE 128
#define NUM_BLOCKS 8
void BlockFrequency(ac_int<1, false> bit, ac_int<1, false>& valid, ac_int<1, false>& result) {
  static ac_int<7, false> blockSum = 0;
  static ac_fixed<16, 8, false> sum = 0.0;
  ac_fixed<8, 4, false> pi_fixed, v;
  static ac_int<4, false> i = 0;
  static ac_int<8, false> j = 0;
  if (j == 0) {
    i++;
    blockSum = 0;
  }
  blockSum += bit;
  j++;
  if (j == BLOCK_SIZE) {
    pi_fixed = (ac_fixed<12, 4, false>) blockSum / BLOCK_SIZE;
    const ac_fixed<8, 4, false> half = 0.5;
    v = pi_fixed - half;
    sum += v * v;
    j = 0;
  }
  if (i == NUM_BLOCKS) {
    const ac_fixed<16, 8, false> threshold = 13.8155 / 512.0;
    valid = true;
    result = (sum < threshold) ? 0 : 1;
  } else {
    valid = false;
    result = 0;
}}
