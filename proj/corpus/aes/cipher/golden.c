typedef uint8_t state_t;
#define Nb 4
#define Nr 10
#define AES_KEYLEN 16
#define AES_keyExpSize 176

void Cipher(state_t state[4][4], const uint8_t RoundKey[AES_keyExpSize]) {
  uint8_t round;
  AddRoundKey(0, state, RoundKey);
  for (round = 1; round <= Nr; ++round) {
    SubBytes(state);
    ShiftRows(state);
    if (round < Nr) {
      MixColumns(state);
    }
    AddRoundKey(round, state, RoundKey);
  }
}
