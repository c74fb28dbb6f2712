#define N  20000
#define THRESHOLD (ac_int<12, false>)397
void CumulativeSums_Streaming(ac_int<1, false> bit, ac_int<1, false>* output, ac_int<1, false>* valid) {
  static ac_int<12, false> S = 0;
  static ac_int<12, false> sup = 0;
  static ac_int<12, false> inf = 0;
  S += bit ? 1 : -1;
  sup = sup > S ? sup : S;
  inf = inf < S ? inf : S;
  // Logic for output based on sup and inf
  static ac_int<16, false> processed_bits = 0;
  processed_bits++;
  if (processed_bits == N) {
    *output = (sup < THRESHOLD && inf > -THRESHOLD) ? 1 : 0;
    *valid = (processed_bits == N);
    processed_bits = 0;
  } else {
    *output = 0;
    *valid = 0;
}}
