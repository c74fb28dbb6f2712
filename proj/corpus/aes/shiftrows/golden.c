typedef uint8_t state_t;
#define Nb 4
#define Nr 10
#define AES_KEYLEN 16
#define AES_keyExpSize 176

static void ShiftRows(state_t state[4][4]) {
  uint8_t temp;
  int i, j;

  // Loop over rows 1 to 3 (0-based indexing)
  for (i = 1; i < 4; ++i) {
    // Number of positions to left shift for current row
    int shift = i;

    // Use a separate loop for the number of shifts
    for (j = 0; j < shift; ++j) {
      temp = state[0][i];  // Store the element to be shifted
      // Shift all elements by one position to the left
      for (int k = 0; k < 3; ++k) {
        state[k][i] = state[k + 1][i];
      }
      state[3][i] = temp; // Place the temp value at the end
    }
  }
}
