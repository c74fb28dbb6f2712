#define N 1048576
#define M 1032
#define N_WIDTH 20
#define M_WIDTH 10
#define CHI2_THRESHOLD_FIXED ac_fixed<21, 21, false>(1056300.0)
void OverlappingTemplateMatchings(int epsilon, ac_int<1, false> *is_random_out, ac_int<1, false> *valid_output_out) {
  static ac_int<9, false> W_obs = 0;
  static ac_int<10, false> nu[6] = {0, 0, 0, 0, 0, 0};
  static ac_int<9, false> shift_reg[9] = {0};
  static ac_int<N_WIDTH+1, false> n_counter = 0;
  static const ac_fixed<32, 16, false> pi[6] = {
    2.746566,
    ac_fixed<32, 16, false>(5.386218), ac_fixed<32, 16, false>(7.17457),
    ac_fixed<32, 16, false>(9.94322), ac_fixed<32, 16, false>(14.198031), ac_fixed<32, 16, false>(7.1497515)
  };
ac_fixed<23, 22> chi2 = 0;
  for (int i = 8; i > 0; i--) {
    shift_reg[i] = shift_reg[i - 1];
  }
  shift_reg[0] = ac_int<1, false>(epsilon);
  ac_int<1, false> match = 1;
  for (int i = 0; i < 9; i++) {
    if (shift_reg[i] != 1) {
      match = 0;
      break;
    }
  }
  if (match) {
    W_obs++;
  }
  n_counter++;
  if (n_counter % M == 0) {
    if (W_obs <= 4) {
      nu[(int)W_obs]++;
    } else {
      nu[5]++;
    }
    W_obs = 0;
  }
  *is_random_out = 0;
  *valid_output_out = 0;
  if (n_counter == N) {
    for (int i = 0; i < 6; i++) {
        chi2 +=  nu[i] * nu [i] * pi[i];
    }
    *is_random_out = chi2 < CHI2_THRESHOLD_FIXED;
  *valid_output_out = true;
    for (int i = 0; i < 6; i++) {
      nu[i] = 0;
    }
    n_counter = 0;
}}
