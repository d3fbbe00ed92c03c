// Generated by the protocol buffer compiler.  DO NOT EDIT!
// source: fsimage.proto

package org.apache.hadoop.hdfs.server.namenode;

public final class FsImageProto {
  private FsImageProto() {}
  public static void registerAllExtensions(
      com.google.protobuf.ExtensionRegistry registry) {
  }
  public interface FileSummaryOrBuilder extends
      com.google.protobuf.MessageOrBuilder {

    boolean hasOndiskVersion();
    int getOndiskVersion();
  }
  public static final class FileSummary extends
      com.google.protobuf.GeneratedMessageV3 implements
      FileSummaryOrBuilder {
    private FileSummary(com.google.protobuf.GeneratedMessageV3.Builder<?> builder) {
      super(builder);
    }
    private FileSummary() {
      codec_ = "";
    }

    @java.lang.Override
    public final com.google.protobuf.UnknownFieldSet
    getUnknownFields() {
      return this.unknownFields;
    }
    private FileSummary(
        com.google.protobuf.CodedInputStream input,
        com.google.protobuf.ExtensionRegistryLite extensionRegistry)
        throws com.google.protobuf.InvalidProtocolBufferException {
      this();
      if (extensionRegistry == null) {
        throw new java.lang.NullPointerException();
      }
      com.google.protobuf.UnknownFieldSet.Builder unknownFields =
          com.google.protobuf.UnknownFieldSet.newBuilder();
      this.unknownFields = unknownFields.build();
    }
    public static final com.google.protobuf.Descriptors.Descriptor
        getDescriptor() {
      return org.apache.hadoop.hdfs.server.namenode.FsImageProto.internal_static_hadoop_hdfs_fsimage_FileSummary_descriptor;
    }

    private int bitField0_;
    private int ondiskVersion_;
    private volatile java.lang.Object codec_;

    public boolean hasOndiskVersion() {
      return ((bitField0_ & 0x00000001) != 0);
    }
    public int getOndiskVersion() {
      return ondiskVersion_;
    }
    public com.google.protobuf.ByteString
        getCodecBytes() {
      java.lang.Object ref = codec_;
      return (com.google.protobuf.ByteString) ref;
    }
  }
}
