#define MAX_SIZE 64

int partition(int arr[MAX_SIZE], int low, int high) {
    int pivot = arr[low];
    int i = low;
    int j = high;
    if (low == high) {
        return low;
    }
    while (i < j) {
        while (arr[i] <= pivot && i <= high - 1) {
            i++;
        }
        while (arr[j] > pivot && j >= low + 1) {
            j--;
        }
        if (i < j) {
            int temp = arr[i];
            arr[i] = arr[j];
            arr[j] = temp;
        }
    }
    int temp = arr[low];
    arr[low] = arr[j];
    arr[j] = temp;
    return j;
}
void quickSort(int arr[MAX_SIZE], int low, int high) {
int stack[100];
int top = -1;
if (high - low + 1 > MAX_SIZE) {
    return;
}
stack[++top] = low;
stack[++top] = high;
while (top >= 0) {
    high = stack[top--];
    low = stack[top--];
    int partitionIndex = partition(arr, low, high);
    if (partitionIndex + 1 < high) {
        stack[++top] = partitionIndex + 1;
        stack[++top] = high;
    }
    if (low < partitionIndex - 1) {
        stack[++top] = low;
        stack[++top] = partitionIndex - 1;
}}}
