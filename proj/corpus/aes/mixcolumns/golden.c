typedef uint8_t state_t;
#define Nb 4
#define Nr 10
#define AES_KEYLEN 16
#define AES_keyExpSize 176

static void MixColumns(state_t state[4][4]) {
  uint8_t i, Tmp, Tm, t;
  for (i = 0; i < 4; ++i) {
    t   = state[i][0];
    Tmp = state[i][0] ^ state[i][1] ^ state[i][2] ^ state[i][3];
    Tm  = state[i][0] ^ state[i][1]; Tm = xtime(Tm);
    state[i][0] ^= Tm ^ Tmp;

    // Corrected lines with direct array access
    Tm  = state[i][1] ^ state[i][2]; Tm = xtime(Tm);
    state[i][1] ^= Tm ^ Tmp;
    Tm  = state[i][2] ^ state[i][3]; Tm = xtime(Tm);
    state[i][2] ^= Tm ^ Tmp;
    Tm  = state[i][3] ^ t;              Tm = xtime(Tm);
    state[i][3] ^= Tm ^ Tmp;
  }
}
