class Sample {
  void tick() {
    count = count + 1;
  }
}
