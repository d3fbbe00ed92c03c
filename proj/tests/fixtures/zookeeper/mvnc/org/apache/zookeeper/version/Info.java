/*
 * Licensed to the Apache Software Foundation (ASF) under one
 * or more contributor license agreements.
 */

package org.apache.zookeeper.version;

public interface Info {

    int MAJOR = 3;
    int MINOR = 9;
    int MICRO = 2;
    String QUALIFIER = "".isEmpty() ? null : "";
    String REVISION_HASH = "e454e8c7283100c7caec6dcae2bc82aaecb63023";
    String BUILD_DATE = "2024-03-04 18:22 UTC";

}
