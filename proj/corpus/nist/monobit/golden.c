#define TARGET_BITS 128
#define P_VALUE_THRESHOLD 0.01
#define THRESHOLD 29
typedef ac_int<9, true> sum_type;  // true for signed
typedef ac_int<8, false> count_type;  // false for unsigned
typedef ac_int<1, false> bit_type;
void
Frequency_Bit(bit_type *bit, bit_type *valid, bit_type *result)
{
  static sum_type    sum = 0;
  static count_type count = 0;
  sum += (*bit) ? sum_type(1) : sum_type(-1);
  count++;
  if (count == TARGET_BITS) {
    // Check if sum is within the threshold range
    *result = (sum <= THRESHOLD) && (sum >= -THRESHOLD);
    *valid = 1;
    count = 0;
    sum = 0;
  } else {
    *result = 0;
    *valid = 0;
}}
