typedef uint8_t state_t;
#define Nb 4
#define Nr 10
#define AES_KEYLEN 16
#define AES_keyExpSize 176

static void SubBytes(state_t state[4][4]) {
  uint8_t i, j;
  for (i = 0; i < 4; ++i) {
    for (j = 0; j < 4; ++j) {
      state[j][i] = getSBoxValue(state[j][i]);
    }
  }
}
